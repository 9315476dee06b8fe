#include "ifsseq/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ifsseq/error.hpp"

namespace ifsseq {

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image))
{
    std::vector<bool> seen(image_.size(), false);
    for (std::size_t v : image_) {
        if (v >= image_.size() || seen[v])
            throw InputError("permutation: image is not a bijection");
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t n)
{
    std::vector<std::size_t> image(n);
    std::iota(image.begin(), image.end(), std::size_t{0});
    return Permutation(std::move(image));
}

bool Permutation::is_identity() const
{
    for (std::size_t i = 0; i < image_.size(); ++i)
        if (image_[i] != i)
            return false;
    return true;
}

Permutation Permutation::inverse() const
{
    std::vector<std::size_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i)
        inv[image_[i]] = i;
    return Permutation(std::move(inv));
}

Permutation Permutation::after(const Permutation& inner) const
{
    if (inner.size() != size())
        throw InputError("permutation: size mismatch in composition");
    std::vector<std::size_t> out(size());
    for (std::size_t i = 0; i < size(); ++i)
        out[i] = image_[inner[i]];
    return Permutation(std::move(out));
}

std::string Permutation::to_string() const
{
    if (is_identity())
        return "identity";
    std::string s = "(";
    for (std::size_t i = 0; i < image_.size(); ++i) {
        if (i)
            s += ' ';
        s += std::to_string(image_[i] + 1);
    }
    return s + ")";
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    CostMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size())
            throw InputError("cost matrix: not square");
        for (std::size_t j = 0; j < rows.size(); ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

CostMatrix CostMatrix::transposed() const
{
    CostMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

double CostMatrix::cost_of(const Permutation& sigma) const
{
    if (sigma.size() != n_)
        throw InputError("cost matrix: permutation size mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
        total += (*this)(i, sigma[i]);
    return total;
}

namespace {

struct Duals {
    std::vector<double> u; // rows, 1-based
    std::vector<double> v; // columns, 1-based
};

// Shortest augmenting path Hungarian method, O(n^3). Keeps u[i] + v[j] <= c(i, j)
// with equality on the returned assignment.
Duals hungarian(const CostMatrix& c)
{
    const std::size_t n = c.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    return {std::move(u), std::move(v)};
}

// Kuhn augmenting-path search restricted to rows >= first_row and allowed columns.
class TightMatcher {
public:
    TightMatcher(const std::vector<std::vector<char>>& tight, std::size_t n) : tight_(tight), n_(n) {}

    bool has_perfect_matching(std::size_t first_row, const std::vector<char>& column_taken)
    {
        match_col_.assign(n_, npos);
        for (std::size_t i = first_row; i < n_; ++i) {
            visited_.assign(n_, 0);
            if (!augment(i, column_taken))
                return false;
        }
        return true;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool augment(std::size_t row, const std::vector<char>& taken)
    {
        for (std::size_t j = 0; j < n_; ++j) {
            if (!tight_[row][j] || taken[j] || visited_[j])
                continue;
            visited_[j] = 1;
            if (match_col_[j] == npos || augment(match_col_[j], taken)) {
                match_col_[j] = row;
                return true;
            }
        }
        return false;
    }

    const std::vector<std::vector<char>>& tight_;
    std::size_t n_;
    std::vector<std::size_t> match_col_;
    std::vector<char> visited_;
};

} // namespace

Matching optimal_matching(const CostMatrix& costs, double tie_tol)
{
    const std::size_t n = costs.size();
    if (n == 0)
        return {Permutation::identity(0), 0.0};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(costs(i, j)))
                throw InputError("optimal_matching: non-finite cost");

    const Duals duals = hungarian(costs);

    // Every optimal assignment uses only tight edges of an optimal dual, and every
    // perfect matching on tight edges is optimal.
    std::vector<std::vector<char>> tight(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            tight[i][j] = costs(i, j) - duals.u[i + 1] - duals.v[j + 1] <= tie_tol;

    TightMatcher matcher(tight, n);
    std::vector<char> taken(n, 0);
    std::vector<std::size_t> image(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool placed = false;
        for (std::size_t j = 0; j < n && !placed; ++j) {
            if (!tight[i][j] || taken[j])
                continue;
            taken[j] = 1;
            if (matcher.has_perfect_matching(i + 1, taken)) {
                image[i] = j;
                placed = true;
            } else {
                taken[j] = 0;
            }
        }
        if (!placed)
            throw Error("optimal_matching: tight subgraph lost its perfect matching");
    }
    Permutation sigma(std::move(image));
    const double cost = costs.cost_of(sigma);
    return {std::move(sigma), cost};
}

Matching brute_force_matching(const CostMatrix& costs)
{
    std::vector<std::size_t> image(costs.size());
    std::iota(image.begin(), image.end(), std::size_t{0});
    std::vector<std::size_t> best = image;
    double best_cost = costs.cost_of(Permutation(image));
    while (std::next_permutation(image.begin(), image.end())) {
        const double c = costs.cost_of(Permutation(image));
        if (c < best_cost) {
            best_cost = c;
            best = image;
        }
    }
    return {Permutation(std::move(best)), best_cost};
}

} // namespace ifsseq
