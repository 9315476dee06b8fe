#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ifsseq/assignment.hpp"
#include "ifsseq/metric_core.hpp"

namespace ifsseq {

/// Hyperbolic iterated function system: n >= 1 affine contractions that all
/// send the box `domain` into itself.
class Ifs {
public:
    /// Throws InvalidContraction if a map is not a contraction or leaves the
    /// domain, InputError on empty map lists or dimension mismatch.
    Ifs(Box domain, std::vector<AffineMap> maps);

    const Box& domain() const { return domain_; }
    const std::vector<AffineMap>& maps() const { return maps_; }
    const AffineMap& map(std::size_t i) const { return maps_[i]; }
    std::size_t size() const { return maps_.size(); }
    std::size_t dim() const { return domain_.dim(); }

    /// max_i of the map contractivities.
    double contractivity() const;

    /// Maps reindexed so that slot i holds map sigma[i] of this IFS.
    Ifs reindexed(const Permutation& sigma) const;

    bool operator==(const Ifs& other) const { return domain_ == other.domain_ && maps_ == other.maps_; }

private:
    Box domain_;
    std::vector<AffineMap> maps_;
};

inline double ifs_contractivity(const Ifs& s) { return s.contractivity(); }

/// Throws ArityMismatch unless both IFSs have the same arity and domain.
void require_comparable(const Ifs& s, const Ifs& t);

/// Entry (i, j) = dbar_inf(s.map(i), t.map(j)) on the shared domain.
CostMatrix cost_matrix(const Ifs& s, const Ifs& t);

/// Minimum over permutations of the summed slotwise dbar_inf distances.
double big_d(const Ifs& s, const Ifs& t);

struct Reordered {
    Ifs ifs;
    Permutation sigma;
};

/// `t` reindexed by the optimal matching against `s`, so that the result is
/// minimally ordered with respect to `s`.
Reordered minimal_order(const Ifs& s, const Ifs& t);

/// True iff the identity matching attains the assignment minimum between
/// `s` and `t` in their given orders.
bool is_minimally_ordered(const Ifs& t, const Ifs& wrt, double tol = 1e-12);

/// Contractivity order: aligns `t` to `s`, then requires
/// contractivity(s_i) <= contractivity(t_i) in every slot.
bool leq(const Ifs& s, const Ifs& t);

/// True iff "is minimally ordered with respect to" is transitive on the
/// given family, checked over all ordered triples.
bool is_mo_set(std::span<const Ifs> family);

} // namespace ifsseq
