#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifsseq/ifs_space.hpp"

namespace ifsseq {

/// Tolerance used when comparing contractivity factors of computed maps.
inline constexpr double kFactorTol = 1e-12;

/// Finite sequence of IFSs sharing arity and domain. Indices are zero-based.
class IfsSequence {
public:
    /// Throws InputError on an empty list and ArityMismatch on mixed arity
    /// or domain.
    explicit IfsSequence(std::vector<Ifs> terms);

    std::size_t size() const { return terms_.size(); }
    const Ifs& operator[](std::size_t j) const { return terms_[j]; }
    const std::vector<Ifs>& terms() const { return terms_; }
    const Ifs& back() const { return terms_.back(); }
    std::size_t arity() const { return terms_.front().size(); }

    /// True once `align_chain` has produced this sequence.
    bool aligned() const { return aligned_; }

    /// Reindexing applied to each term by `align_chain` (identity otherwise).
    const std::vector<Permutation>& alignment() const { return alignment_; }

    /// Maps in slot i of every term, in sequence order.
    std::vector<AffineMap> slot(std::size_t i) const;

private:
    friend IfsSequence align_chain(const IfsSequence&);

    std::vector<Ifs> terms_;
    bool aligned_ = false;
    std::vector<Permutation> alignment_;
};

/// Reindexes term j+1 to be minimally ordered with respect to the already
/// reindexed term j; the first term is unchanged. Idempotent.
IfsSequence align_chain(const IfsSequence& seq);

/// leq(term j+1, term j) for every consecutive pair of the chain-aligned
/// sequence.
bool is_decreasing(const IfsSequence& seq);

/// Smallest k such that leq(term j+1, term j) holds for all j >= k, where at
/// least one pair must remain; a single-term sequence yields 0.
std::optional<std::size_t> eventually_decreasing_at(const IfsSequence& seq);

/// Smallest N such that big_d(term j, term k) < eps for all j, k >= N, the
/// tail holding at least two terms; a single-term sequence yields 0.
/// Throws InputError unless eps > 0.
std::optional<std::size_t> cauchy_index(const IfsSequence& seq, double eps);

/// Smallest N with big_d(term j, limit) < eps for every j >= N.
std::optional<std::size_t> converges_to(const IfsSequence& seq, const Ifs& limit, double eps);

struct ContractionLimit {
    AffineMap map;          ///< limit candidate: the final term
    double factor_bound;    ///< min of the contractivity factors over the decreasing tail
    std::size_t tail_start; ///< first index of the certified Cauchy tail
};

/// Limit of a sequence of contractions that is eventually decreasing in
/// contractivity and Cauchy at `eps` under dbar_inf on `domain`.
///
/// Throws PreconditionError when the factors never settle into a decreasing
/// tail or when no tail of two or more terms is eps-Cauchy.
ContractionLimit limit_of_contractions(std::span<const AffineMap> maps, const Box& domain, double eps);

struct SequenceReport {
    IfsSequence aligned;
    std::vector<double> consecutive_distances;       ///< big_d(term j, term j+1)
    std::vector<std::vector<double>> factor_traces;  ///< [slot][term] contractivity
    bool decreasing = false;
    std::optional<std::size_t> eventually_decreasing_at;
    std::optional<std::size_t> cauchy_at;
    bool transitive = true;                          ///< is_mo_set over the terms as given
    std::optional<Ifs> limit;
    std::optional<std::size_t> tail_start;           ///< max over slots of the per-slot tail starts
    double residual = 0.0;                           ///< max over the tail of big_d(term j, limit)
    std::vector<std::string> notes;
};

/// Chain-aligns the sequence, builds the slotwise limit candidate with
/// `limit_of_contractions`, and fills the report. Per-slot precondition
/// failures propagate as PreconditionError carrying the slot index.
SequenceReport limit_candidate(const IfsSequence& seq, double eps);

/// As `limit_candidate`, but a failed limit construction is recorded in
/// `notes` and leaves `limit` empty instead of throwing.
SequenceReport analyze_sequence(const IfsSequence& seq, double eps);

} // namespace ifsseq
