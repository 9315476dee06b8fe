#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ifsseq/ifs_space.hpp"
#include "ifsseq/point_set.hpp"
#include "ifsseq/sequences.hpp"

namespace ifsseq {

/// Default cap on the number of (pre-deduplication) points an iteration may produce.
inline constexpr std::size_t kDefaultPointCap = 5'000'000;

/// Default snap pitch: 1e-4 in one dimension, 1e-3 per axis otherwise.
double default_resolution(std::size_t dim);

/// The 2^d vertices of the IFS domain, snapped at `resolution`.
PointSet default_seed(const Ifs& s, double resolution);

/// Hutchinson operator W(B) = union_i f_i(B), snapped to B's resolution.
/// Throws InputError if a point of B lies outside the domain (beyond the
/// snap tolerance) or dimensions differ.
PointSet hutchinson(const Ifs& s, const PointSet& b);

/// W applied `depth` times to `seed`. Throws ResourceError when an iteration
/// would produce more than `point_cap` points before deduplication.
PointSet attractor_points(const Ifs& s, std::size_t depth, const PointSet& seed,
                          std::size_t point_cap = kDefaultPointCap);

/// Contraction-mapping bound t^depth / (1 - t) * h(seed, W(seed)) on the
/// Hausdorff distance between W^depth(seed) and the attractor.
double render_error_bound(const Ifs& s, std::size_t depth, const PointSet& seed);

/// Smallest depth whose `render_error_bound` is below `target`, capped at `max_depth`.
std::size_t depth_for_accuracy(const Ifs& s, const PointSet& seed, double target, std::size_t max_depth = 200);

/// Random-iteration rendering: starting at the domain centre, applies a
/// uniformly chosen map per step, discards the first `burn_in` points and
/// keeps the next `count`. Deterministic for a given `rng_seed`.
PointSet chaos_game(const Ifs& s, std::size_t count, std::size_t burn_in, std::uint64_t rng_seed,
                    double resolution);

/// Finite prefix of a code-space word; symbols are zero-based map indices.
struct Address {
    std::vector<std::size_t> symbols;
};

/// (... o f_{g2} o f_{g1})(x): the first symbol is applied first.
/// Throws InputError on an out-of-range symbol or a point outside the domain.
Vector code_point(const Ifs& s, const Address& addr, const Vector& x);

struct AttractorConvergence {
    std::vector<double> distances; ///< h(A_j, A) per term
    std::vector<double> bounds;    ///< discretization slack per term
};

/// Renders every term and the reference IFS at `depth` from the domain
/// vertices at `resolution` and reports h(A_j, A). The slack for term j is
/// the render error bound of A_j plus that of A plus 2 * resolution.
AttractorConvergence attractor_convergence_report(const IfsSequence& seq, const Ifs& s, std::size_t depth,
                                                  double resolution);

} // namespace ifsseq
