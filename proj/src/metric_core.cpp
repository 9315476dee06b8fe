#include "ifsseq/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ifsseq/error.hpp"

namespace ifsseq {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what)
{
    if (got != want)
        throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(got) +
                         " vs " + std::to_string(want) + ")");
}

} // namespace

Box::Box(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi))
{
    if (lo_.size() == 0)
        throw InputError("box: dimension must be at least 1");
    if (lo_.size() != hi_.size())
        throw InputError("box: lo and hi differ in length");
    for (Eigen::Index i = 0; i < lo_.size(); ++i) {
        if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]))
            throw InputError("box: bounds must be finite");
        if (lo_[i] > hi_[i])
            throw InputError("box: lo[" + std::to_string(i) + "] > hi[" + std::to_string(i) + "]");
    }
}

Box Box::unit(std::size_t dim)
{
    const auto d = static_cast<Eigen::Index>(dim);
    return Box(Vector::Zero(d), Vector::Ones(d));
}

bool Box::contains(std::span<const double> x, double tol) const
{
    if (x.size() != dim())
        return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        if (x[i] < lo_[k] - tol || x[i] > hi_[k] + tol)
            return false;
    }
    return true;
}

bool Box::contains(const Vector& x, double tol) const
{
    return contains(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), tol);
}

std::vector<Vector> Box::vertices() const
{
    const std::size_t d = dim();
    if (d > kMaxVertexDim)
        throw ResourceError("box: vertex enumeration refused for dimension " + std::to_string(d) +
                         " (limit " + std::to_string(kMaxVertexDim) + ")");
    const std::size_t count = std::size_t{1} << d;
    std::vector<Vector> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Vector v(static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < d; ++i) {
            const auto e = static_cast<Eigen::Index>(i);
            v[e] = ((k >> i) & 1U) ? hi_[e] : lo_[e];
        }
        out.push_back(std::move(v));
    }
    return out;
}

AffineMap::AffineMap(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b))
{
    if (b_.size() == 0)
        throw InputError("affine map: dimension must be at least 1");
    if (a_.rows() != b_.size() || a_.cols() != b_.size())
        throw InputError("affine map: A must be " + std::to_string(b_.size()) + "x" +
                         std::to_string(b_.size()));
    if (!a_.allFinite() || !b_.allFinite())
        throw InputError("affine map: coefficients must be finite");
    lipschitz_ = spectral_norm(a_);
}

AffineMap AffineMap::contraction(Matrix a, Vector b)
{
    AffineMap map(std::move(a), std::move(b));
    if (!map.is_contraction())
        throw InvalidContraction("affine map: contractivity " + std::to_string(map.lipschitz()) +
                                 " is not below 1");
    return map;
}

AffineMap AffineMap::constant(const Vector& c)
{
    return AffineMap(Matrix::Zero(c.size(), c.size()), c);
}

AffineMap AffineMap::identity(std::size_t dim)
{
    const auto d = static_cast<Eigen::Index>(dim);
    return AffineMap(Matrix::Identity(d, d), Vector::Zero(d));
}

AffineMap AffineMap::line(double scale, double shift)
{
    return AffineMap(Matrix::Constant(1, 1, scale), Vector::Constant(1, shift));
}

Vector AffineMap::operator()(const Vector& x) const
{
    require_dim(static_cast<std::size_t>(x.size()), dim(), "affine map evaluation");
    return a_ * x + b_;
}

void AffineMap::apply(std::span<const double> x, std::span<double> out) const
{
    const std::size_t d = dim();
    for (std::size_t r = 0; r < d; ++r) {
        const auto i = static_cast<Eigen::Index>(r);
        double acc = b_[i];
        for (std::size_t c = 0; c < d; ++c)
            acc += a_(i, static_cast<Eigen::Index>(c)) * x[c];
        out[r] = acc;
    }
}

bool AffineMap::maps_into(const Box& box, double tol) const
{
    if (box.dim() != dim())
        return false;
    for (const Vector& v : box.vertices()) {
        if (!box.contains(a_ * v + b_, tol))
            return false;
    }
    return true;
}

AffineMap AffineMap::after(const AffineMap& inner) const
{
    require_dim(inner.dim(), dim(), "affine map composition");
    return AffineMap(a_ * inner.a_, a_ * inner.b_ + b_);
}

bool approx_equal(const AffineMap& f, const AffineMap& g, double tol)
{
    if (f.dim() != g.dim())
        return false;
    return (f.linear() - g.linear()).cwiseAbs().maxCoeff() <= tol &&
           (f.offset() - g.offset()).cwiseAbs().maxCoeff() <= tol;
}

double sup_distance(const AffineMap& f, const AffineMap& g, const Box& domain)
{
    require_dim(f.dim(), g.dim(), "sup_distance");
    require_dim(f.dim(), domain.dim(), "sup_distance");
    const Matrix da = f.linear() - g.linear();
    const Vector db = f.offset() - g.offset();
    double best = 0.0;
    for (const Vector& v : domain.vertices())
        best = std::max(best, (da * v + db).norm());
    return best;
}

double sup_distance_sampled(const AffineMap& f, const AffineMap& g, const Box& domain,
                            std::size_t per_axis, std::size_t max_points)
{
    require_dim(f.dim(), g.dim(), "sup_distance_sampled");
    require_dim(f.dim(), domain.dim(), "sup_distance_sampled");
    const std::size_t d = domain.dim();
    std::size_t m = std::max<std::size_t>(per_axis, 2);
    const auto root = static_cast<std::size_t>(
        std::floor(std::pow(static_cast<double>(max_points), 1.0 / static_cast<double>(d)) + 1e-9));
    m = std::max<std::size_t>(2, std::min(m, root));

    const Matrix da = f.linear() - g.linear();
    const Vector db = f.offset() - g.offset();
    std::vector<std::size_t> idx(d, 0);
    Vector x(static_cast<Eigen::Index>(d));
    double best = 0.0;
    for (;;) {
        for (std::size_t i = 0; i < d; ++i) {
            const auto e = static_cast<Eigen::Index>(i);
            const double t = static_cast<double>(idx[i]) / static_cast<double>(m - 1);
            x[e] = domain.lo()[e] + t * (domain.hi()[e] - domain.lo()[e]);
        }
        best = std::max(best, (da * x + db).norm());
        std::size_t axis = 0;
        while (axis < d && ++idx[axis] == m)
            idx[axis++] = 0;
        if (axis == d)
            break;
    }
    return best;
}

double dbar_inf(const AffineMap& f, const AffineMap& g, const Box& domain)
{
    return bounded(sup_distance(f, g, domain));
}

} // namespace ifsseq
