#include "ifsseq/ifs_space.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "ifsseq/error.hpp"

namespace ifsseq {

Ifs::Ifs(Box domain, std::vector<AffineMap> maps) : domain_(std::move(domain)), maps_(std::move(maps))
{
    if (maps_.empty())
        throw InputError("ifs: at least one map is required");
    for (std::size_t i = 0; i < maps_.size(); ++i) {
        const AffineMap& f = maps_[i];
        if (f.dim() != domain_.dim())
            throw InputError("ifs: map " + std::to_string(i + 1) + " has dimension " +
                             std::to_string(f.dim()) + ", domain has " + std::to_string(domain_.dim()));
        if (!f.is_contraction())
            throw InvalidContraction("ifs: map " + std::to_string(i + 1) + " has contractivity " +
                                     std::to_string(f.lipschitz()) + " >= 1");
        if (!f.maps_into(domain_))
            throw InvalidContraction("ifs: map " + std::to_string(i + 1) + " does not map the domain into itself");
    }
}

double Ifs::contractivity() const
{
    double t = 0.0;
    for (const AffineMap& f : maps_)
        t = std::max(t, f.lipschitz());
    return t;
}

Ifs Ifs::reindexed(const Permutation& sigma) const
{
    if (sigma.size() != size())
        throw ArityMismatch("ifs: permutation of size " + std::to_string(sigma.size()) +
                            " applied to " + std::to_string(size()) + " maps");
    std::vector<AffineMap> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i)
        out.push_back(maps_[sigma[i]]);
    return Ifs(domain_, std::move(out));
}

void require_comparable(const Ifs& s, const Ifs& t)
{
    if (s.size() != t.size())
        throw ArityMismatch("ifs arity mismatch: " + std::to_string(s.size()) + " vs " + std::to_string(t.size()));
    if (!(s.domain() == t.domain()))
        throw ArityMismatch("ifs domain mismatch");
}

CostMatrix cost_matrix(const Ifs& s, const Ifs& t)
{
    require_comparable(s, t);
    CostMatrix c(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            c(i, j) = dbar_inf(s.map(i), t.map(j), s.domain());
    return c;
}

namespace {

// Sum of the matched entries taken in ascending order, so the value does not
// depend on which side indexes the rows.
double matched_sum(const CostMatrix& c, const Permutation& sigma)
{
    std::vector<double> picked(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        picked[i] = c(i, sigma[i]);
    std::sort(picked.begin(), picked.end());
    double total = 0.0;
    for (double v : picked)
        total += v;
    return total;
}

} // namespace

double big_d(const Ifs& s, const Ifs& t)
{
    const CostMatrix st = cost_matrix(s, t);
    const CostMatrix ts = cost_matrix(t, s);
    return std::min(matched_sum(st, optimal_matching(st).sigma),
                    matched_sum(ts, optimal_matching(ts).sigma));
}

Reordered minimal_order(const Ifs& s, const Ifs& t)
{
    Matching m = optimal_matching(cost_matrix(s, t));
    return {t.reindexed(m.sigma), std::move(m.sigma)};
}

bool is_minimally_ordered(const Ifs& t, const Ifs& wrt, double tol)
{
    const CostMatrix c = cost_matrix(wrt, t);
    const double identity_cost = c.cost_of(Permutation::identity(c.size()));
    return identity_cost <= optimal_matching(c).cost + tol;
}

bool leq(const Ifs& s, const Ifs& t)
{
    const Ifs aligned = minimal_order(s, t).ifs;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.map(i).lipschitz() > aligned.map(i).lipschitz())
            return false;
    return true;
}

bool is_mo_set(std::span<const Ifs> family)
{
    for (std::size_t i = 1; i < family.size(); ++i)
        require_comparable(family[0], family[i]);

    const std::size_t m = family.size();
    // rel[a][b]: family[b] is minimally ordered with respect to family[a].
    std::vector<std::vector<char>> rel(m, std::vector<char>(m, 0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            rel[a][b] = is_minimally_ordered(family[b], family[a]);

    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
                if (rel[a][b] && rel[b][c] && !rel[a][c])
                    return false;
    return true;
}

} // namespace ifsseq
