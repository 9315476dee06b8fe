#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ifsseq/linalg.hpp"

namespace ifsseq {

/// Largest dimension for which box vertices are enumerated (2^d of them).
inline constexpr std::size_t kMaxVertexDim = 20;

/// Axis-aligned compact box [lo, hi] in R^d with the Euclidean metric.
class Box {
public:
    /// Throws InputError unless lo and hi have the same length d >= 1 and
    /// lo[i] <= hi[i] for every axis.
    Box(Vector lo, Vector hi);

    static Box unit(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(lo_.size()); }
    const Vector& lo() const { return lo_; }
    const Vector& hi() const { return hi_; }

    /// Euclidean length of the main diagonal.
    double diameter() const { return (hi_ - lo_).norm(); }

    bool contains(std::span<const double> x, double tol = 0.0) const;
    bool contains(const Vector& x, double tol = 0.0) const;

    /// All 2^d corners, vertex k taking hi on axis i when bit i of k is set.
    std::vector<Vector> vertices() const;

    bool operator==(const Box& other) const { return lo_ == other.lo_ && hi_ == other.hi_; }

private:
    Vector lo_;
    Vector hi_;
};

/// Affine self-map x -> Ax + b of R^d.
///
/// Any square A is accepted here so that non-contractive reference maps (the
/// identity, for instance) can be measured against contractions; use
/// `contraction()` or build an `Ifs` to enforce the contraction invariant.
class AffineMap {
public:
    AffineMap(Matrix a, Vector b);

    /// Builds a map and throws InvalidContraction unless its Lipschitz
    /// constant is strictly below one.
    static AffineMap contraction(Matrix a, Vector b);

    /// The constant map with value `c`.
    static AffineMap constant(const Vector& c);
    static AffineMap identity(std::size_t dim);

    /// One-dimensional shorthand for x -> scale*x + shift.
    static AffineMap line(double scale, double shift);

    std::size_t dim() const { return static_cast<std::size_t>(b_.size()); }
    const Matrix& linear() const { return a_; }
    const Vector& offset() const { return b_; }

    /// Largest singular value of A.
    double lipschitz() const { return lipschitz_; }
    bool is_contraction() const { return lipschitz_ < 1.0; }

    /// Returns Ax + b. Throws InputError on dimension mismatch.
    Vector operator()(const Vector& x) const;

    /// Unchecked evaluation into `out`; both spans have length dim().
    void apply(std::span<const double> x, std::span<double> out) const;

    /// True when every vertex of `box` is mapped into `box` (within `tol`).
    bool maps_into(const Box& box, double tol = 1e-12) const;

    /// (this o inner)(x) = this(inner(x)).
    AffineMap after(const AffineMap& inner) const;

    bool operator==(const AffineMap& other) const { return a_ == other.a_ && b_ == other.b_; }

private:
    Matrix a_;
    Vector b_;
    double lipschitz_;
};

/// Lipschitz constant of `map` (largest singular value of its linear part).
inline double contractivity(const AffineMap& map) { return map.lipschitz(); }

/// True when the two maps agree coefficient-wise within `tol`.
bool approx_equal(const AffineMap& f, const AffineMap& g, double tol = 1e-12);

/// sup over the box of |f(x) - g(x)|, computed exactly from the box vertices:
/// the norm of an affine function is convex, so its maximum over a box is
/// attained at a corner.
double sup_distance(const AffineMap& f, const AffineMap& g, const Box& domain);

/// Grid-sampled estimate of `sup_distance`, used to cross-check the vertex
/// method. `per_axis` points per dimension, reduced so that the grid has at
/// most `max_points` points in total.
double sup_distance_sampled(const AffineMap& f, const AffineMap& g, const Box& domain,
                            std::size_t per_axis = 10000, std::size_t max_points = 1000000);

/// The bounded metric s/(1+s) applied to a raw distance s >= 0.
inline double bounded(double s) { return s / (1.0 + s); }

/// Bounded sup-metric sup_x d/(1+d) between two maps on `domain`. Since
/// t -> t/(1+t) is increasing, this equals bounded(sup_distance(f, g)).
/// Always in [0, 1).
double dbar_inf(const AffineMap& f, const AffineMap& g, const Box& domain);

} // namespace ifsseq
