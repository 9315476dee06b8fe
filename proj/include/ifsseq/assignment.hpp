#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ifsseq {

/// Bijection on {0, ..., n-1}; `image()[i]` is the image of i.
class Permutation {
public:
    /// Throws InputError unless `image` is a bijection on {0..n-1}.
    explicit Permutation(std::vector<std::size_t> image);

    static Permutation identity(std::size_t n);

    std::size_t size() const { return image_.size(); }
    std::size_t operator[](std::size_t i) const { return image_[i]; }
    const std::vector<std::size_t>& image() const { return image_; }

    bool is_identity() const;
    Permutation inverse() const;

    /// (this o inner)(i) = this[inner[i]].
    Permutation after(const Permutation& inner) const;

    /// "identity" or the one-based image list, e.g. "(2 1)".
    std::string to_string() const;

    auto operator<=>(const Permutation&) const = default;

private:
    std::vector<std::size_t> image_;
};

/// Dense n x n matrix of assignment costs, row-major.
class CostMatrix {
public:
    explicit CostMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    /// Throws InputError unless `rows` is square.
    static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    CostMatrix transposed() const;

    /// Sum of entries (i, sigma[i]) in row order.
    double cost_of(const Permutation& sigma) const;

private:
    std::size_t n_;
    std::vector<double> data_;
};

struct Matching {
    Permutation sigma;
    double cost;
};

/// Minimum-cost assignment: sigma minimizing sum_i C(i, sigma[i]).
///
/// Solved by the Hungarian method. Among co-optimal permutations (costs
/// within `tie_tol` of the minimum) the lexicographically smallest image is
/// returned, found as the lexicographically first perfect matching in the
/// tight subgraph of the optimal dual. The reported cost is `cost_of(sigma)`.
Matching optimal_matching(const CostMatrix& costs, double tie_tol = 1e-12);

/// Exhaustive minimum over all n! permutations in lexicographic order; the
/// first strict minimum wins. Reference implementation for small n.
Matching brute_force_matching(const CostMatrix& costs);

} // namespace ifsseq
