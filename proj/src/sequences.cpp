#include "ifsseq/sequences.hpp"

#include <algorithm>
#include <string>

#include "ifsseq/error.hpp"

namespace ifsseq {

IfsSequence::IfsSequence(std::vector<Ifs> terms) : terms_(std::move(terms))
{
    if (terms_.empty())
        throw InputError("sequence: at least one term is required");
    for (std::size_t j = 1; j < terms_.size(); ++j) {
        try {
            require_comparable(terms_.front(), terms_[j]);
        } catch (const ArityMismatch& e) {
            throw ArityMismatch("sequence term " + std::to_string(j + 1) + ": " + e.what());
        }
    }
    alignment_.assign(terms_.size(), Permutation::identity(arity()));
}

std::vector<AffineMap> IfsSequence::slot(std::size_t i) const
{
    std::vector<AffineMap> out;
    out.reserve(terms_.size());
    for (const Ifs& t : terms_)
        out.push_back(t.map(i));
    return out;
}

IfsSequence align_chain(const IfsSequence& seq)
{
    std::vector<Ifs> terms;
    std::vector<Permutation> perms;
    terms.reserve(seq.size());
    perms.reserve(seq.size());
    terms.push_back(seq[0]);
    perms.push_back(Permutation::identity(seq.arity()));
    for (std::size_t j = 1; j < seq.size(); ++j) {
        Reordered r = minimal_order(terms.back(), seq[j]);
        terms.push_back(std::move(r.ifs));
        perms.push_back(std::move(r.sigma));
    }
    IfsSequence out(std::move(terms));
    out.aligned_ = true;
    out.alignment_ = std::move(perms);
    return out;
}

namespace {

const IfsSequence& ensure_aligned(const IfsSequence& seq, std::optional<IfsSequence>& storage)
{
    if (seq.aligned())
        return seq;
    storage.emplace(align_chain(seq));
    return *storage;
}

std::vector<char> decreasing_links(const IfsSequence& seq)
{
    std::optional<IfsSequence> storage;
    const IfsSequence& s = ensure_aligned(seq, storage);
    std::vector<char> ok;
    for (std::size_t j = 0; j + 1 < s.size(); ++j)
        ok.push_back(leq(s[j + 1], s[j]));
    return ok;
}

// Smallest k <= last_start such that pred holds for all pairs of the tail
// starting at k; pairwise values supplied lazily by `dist`.
template <class Dist>
std::optional<std::size_t> smallest_tail(std::size_t m, std::size_t last_start, double eps, Dist dist)
{
    // worst[k]: max distance among terms with indices >= k.
    std::vector<double> worst(m + 1, 0.0);
    for (std::size_t k = m; k-- > 0;) {
        double w = worst[k + 1];
        for (std::size_t j = k + 1; j < m; ++j)
            w = std::max(w, dist(k, j));
        worst[k] = w;
    }
    for (std::size_t k = 0; k <= last_start; ++k)
        if (worst[k] < eps)
            return k;
    return std::nullopt;
}

void require_eps(double eps)
{
    if (!(eps > 0.0))
        throw InputError("eps must be positive");
}

} // namespace

bool is_decreasing(const IfsSequence& seq)
{
    const auto links = decreasing_links(seq);
    return std::all_of(links.begin(), links.end(), [](char c) { return c != 0; });
}

std::optional<std::size_t> eventually_decreasing_at(const IfsSequence& seq)
{
    if (seq.size() == 1)
        return 0;
    const auto links = decreasing_links(seq);
    std::size_t k = links.size();
    while (k > 0 && links[k - 1])
        --k;
    if (k == links.size())
        return std::nullopt;
    return k;
}

std::optional<std::size_t> cauchy_index(const IfsSequence& seq, double eps)
{
    require_eps(eps);
    const std::size_t m = seq.size();
    if (m == 1)
        return 0;
    return smallest_tail(m, m - 2, eps, [&](std::size_t a, std::size_t b) { return big_d(seq[a], seq[b]); });
}

std::optional<std::size_t> converges_to(const IfsSequence& seq, const Ifs& limit, double eps)
{
    require_eps(eps);
    require_comparable(seq[0], limit);
    std::size_t k = seq.size();
    while (k > 0 && big_d(seq[k - 1], limit) < eps)
        --k;
    if (k == seq.size())
        return std::nullopt;
    return k;
}

ContractionLimit limit_of_contractions(std::span<const AffineMap> maps, const Box& domain, double eps)
{
    require_eps(eps);
    if (maps.empty())
        throw InputError("limit_of_contractions: empty sequence");
    const std::size_t m = maps.size();

    std::size_t k = m - 1;
    while (k > 0 && maps[k].lipschitz() <= maps[k - 1].lipschitz() + kFactorTol)
        --k;
    if (m > 1 && k == m - 1)
        throw PreconditionError("limit_of_contractions: contractivity factors are not eventually decreasing");

    std::size_t tail = 0;
    if (m > 1) {
        auto n = smallest_tail(m, m - 2, eps, [&](std::size_t a, std::size_t b) {
            return dbar_inf(maps[a], maps[b], domain);
        });
        if (!n)
            throw PreconditionError("limit_of_contractions: no tail is Cauchy at eps = " + std::to_string(eps));
        tail = *n;
    }

    double bound = maps[k].lipschitz();
    for (std::size_t j = k; j < m; ++j)
        bound = std::min(bound, maps[j].lipschitz());
    return {maps.back(), bound, tail};
}

namespace {

SequenceReport build_report(const IfsSequence& seq, double eps, bool throw_on_limit_failure)
{
    require_eps(eps);
    IfsSequence aligned = align_chain(seq);
    SequenceReport r{aligned, {}, {}, false, std::nullopt, std::nullopt, true, std::nullopt, std::nullopt, 0.0, {}};

    for (std::size_t j = 0; j + 1 < aligned.size(); ++j)
        r.consecutive_distances.push_back(big_d(aligned[j], aligned[j + 1]));
    r.factor_traces.assign(aligned.arity(), {});
    for (std::size_t i = 0; i < aligned.arity(); ++i)
        for (std::size_t j = 0; j < aligned.size(); ++j)
            r.factor_traces[i].push_back(aligned[j].map(i).lipschitz());

    r.decreasing = is_decreasing(aligned);
    r.eventually_decreasing_at = eventually_decreasing_at(aligned);
    r.cauchy_at = cauchy_index(aligned, eps);
    r.transitive = is_mo_set(seq.terms());
    if (!r.transitive)
        r.notes.push_back("minimal ordering is not transitive over these terms: chain alignment differs from alignment to the first term");
    if (!r.eventually_decreasing_at)
        r.notes.push_back("contractivity factors are not eventually decreasing");

    std::vector<AffineMap> limit_maps;
    std::size_t tail = 0;
    try {
        for (std::size_t i = 0; i < aligned.arity(); ++i) {
            const auto maps = aligned.slot(i);
            try {
                ContractionLimit c = limit_of_contractions(maps, aligned[0].domain(), eps);
                tail = std::max(tail, c.tail_start);
                limit_maps.push_back(std::move(c.map));
            } catch (const PreconditionError& e) {
                throw PreconditionError("slot " + std::to_string(i + 1) + ": " + e.what(), i);
            }
        }
    } catch (const PreconditionError& e) {
        if (throw_on_limit_failure)
            throw;
        r.notes.push_back(std::string("no limit candidate: ") + e.what());
        return r;
    }

    Ifs limit(aligned[0].domain(), std::move(limit_maps));
    double residual = 0.0;
    for (std::size_t j = tail; j < aligned.size(); ++j)
        residual = std::max(residual, big_d(aligned[j], limit));
    r.limit = std::move(limit);
    r.tail_start = tail;
    r.residual = residual;
    return r;
}

} // namespace

SequenceReport limit_candidate(const IfsSequence& seq, double eps)
{
    return build_report(seq, eps, true);
}

SequenceReport analyze_sequence(const IfsSequence& seq, double eps)
{
    return build_report(seq, eps, false);
}

} // namespace ifsseq
