#include "ifsseq/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ifsseq/error.hpp"

namespace ifsseq {

PointSet::PointSet(std::size_t dim, double resolution, std::span<const double> coords)
    : dim_(dim), resolution_(resolution)
{
    if (dim == 0)
        throw InputError("point set: dimension must be at least 1");
    if (!(resolution > 0.0) || !std::isfinite(resolution))
        throw InputError("point set: resolution must be positive");
    if (coords.empty() || coords.size() % dim != 0)
        throw InputError("point set: expected a nonempty list of " + std::to_string(dim) + "-d points");

    constexpr double kLimit = 4.0e18;
    std::vector<std::int64_t> raw(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const double q = coords[i] / resolution;
        if (!std::isfinite(q) || std::abs(q) > kLimit)
            throw InputError("point set: coordinate out of range for the snap grid");
        raw[i] = std::llround(q);
    }

    const std::size_t n = coords.size() / dim;
    if (dim == 1) {
        std::sort(raw.begin(), raw.end());
        raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
        keys_ = std::move(raw);
    } else {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        auto less = [&](std::size_t a, std::size_t b) {
            return std::lexicographical_compare(raw.begin() + a * dim, raw.begin() + (a + 1) * dim,
                                                raw.begin() + b * dim, raw.begin() + (b + 1) * dim);
        };
        auto same = [&](std::size_t a, std::size_t b) {
            return std::equal(raw.begin() + a * dim, raw.begin() + (a + 1) * dim, raw.begin() + b * dim);
        };
        std::sort(order.begin(), order.end(), less);
        order.erase(std::unique(order.begin(), order.end(), same), order.end());
        keys_.reserve(order.size() * dim);
        for (std::size_t idx : order)
            keys_.insert(keys_.end(), raw.begin() + idx * dim, raw.begin() + (idx + 1) * dim);
    }
    coords_.resize(keys_.size());
    for (std::size_t i = 0; i < keys_.size(); ++i)
        coords_[i] = static_cast<double>(keys_[i]) * resolution_;
}

PointSet PointSet::from_points(std::span<const Vector> points, double resolution)
{
    if (points.empty())
        throw InputError("point set: expected a nonempty list of points");
    const auto d = static_cast<std::size_t>(points.front().size());
    std::vector<double> flat;
    flat.reserve(points.size() * d);
    for (const Vector& p : points) {
        if (static_cast<std::size_t>(p.size()) != d)
            throw InputError("point set: mixed point dimensions");
        flat.insert(flat.end(), p.data(), p.data() + p.size());
    }
    return PointSet(d, resolution, flat);
}

Box PointSet::bounding_box() const
{
    const auto d = static_cast<Eigen::Index>(dim_);
    Vector lo = Vector::Constant(d, std::numeric_limits<double>::infinity());
    Vector hi = Vector::Constant(d, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < size(); ++i) {
        const auto p = point(i);
        for (Eigen::Index k = 0; k < d; ++k) {
            lo[k] = std::min(lo[k], p[static_cast<std::size_t>(k)]);
            hi[k] = std::max(hi[k], p[static_cast<std::size_t>(k)]);
        }
    }
    return Box(lo, hi);
}

namespace {

inline double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double t = a[k] - b[k];
        s += t * t;
    }
    return s;
}

void require_same_dim(const PointSet& a, const PointSet& b)
{
    if (a.dim() != b.dim())
        throw InputError("hausdorff: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
}

double directed_brute_squared(const PointSet& a, const PointSet& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j)
            best = std::min(best, squared_distance(a.point(i), b.point(j)));
        worst = std::max(worst, best);
    }
    return worst;
}

// Uniform grid over a target set with roughly one point per occupied cell.
class Grid {
public:
    explicit Grid(const PointSet& target) : target_(target), dim_(target.dim())
    {
        const Box box = target.bounding_box();
        lo_.resize(dim_);
        double extent = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            const auto e = static_cast<Eigen::Index>(k);
            lo_[k] = box.lo()[e];
            extent = std::max(extent, box.hi()[e] - box.lo()[e]);
        }
        const double per_axis = std::max(1.0, std::floor(std::pow(static_cast<double>(target.size()), 1.0 / static_cast<double>(dim_))));
        cell_ = extent > 0.0 ? extent / per_axis : 1.0;
        counts_.resize(dim_);
        std::size_t total = 1;
        for (std::size_t k = 0; k < dim_; ++k) {
            const auto e = static_cast<Eigen::Index>(k);
            counts_[k] = static_cast<std::int64_t>(std::floor((box.hi()[e] - lo_[k]) / cell_)) + 1;
            total *= static_cast<std::size_t>(counts_[k]);
        }
        start_.assign(total + 1, 0);
        std::vector<std::size_t> cell_of(target.size());
        std::vector<std::int64_t> c(dim_);
        for (std::size_t i = 0; i < target.size(); ++i) {
            cell_coords(target.point(i), c);
            cell_of[i] = linear(c);
            ++start_[cell_of[i] + 1];
        }
        std::partial_sum(start_.begin(), start_.end(), start_.begin());
        items_.resize(target.size());
        std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
        for (std::size_t i = 0; i < target.size(); ++i)
            items_[fill[cell_of[i]]++] = i;
    }

    // Exact squared nearest distance, or any value below `cutoff2` as soon as
    // one is found.
    double nearest_squared(std::span<const double> q, double cutoff2) const
    {
        std::vector<std::int64_t> center(dim_);
        cell_coords(q, center);
        std::int64_t max_ring = 0;
        for (std::size_t k = 0; k < dim_; ++k)
            max_ring = std::max({max_ring, center[k], counts_[k] - 1 - center[k]});

        double best = std::numeric_limits<double>::infinity();
        std::vector<std::int64_t> c(dim_);
        std::vector<std::int64_t> lo(dim_), hi(dim_);
        for (std::int64_t r = 0; r <= max_ring; ++r) {
            for (std::size_t k = 0; k < dim_; ++k) {
                lo[k] = std::max<std::int64_t>(0, center[k] - r);
                hi[k] = std::min<std::int64_t>(counts_[k] - 1, center[k] + r);
            }
            c = lo;
            for (;;) {
                std::int64_t cheb = 0;
                for (std::size_t k = 0; k < dim_; ++k)
                    cheb = std::max(cheb, c[k] > center[k] ? c[k] - center[k] : center[k] - c[k]);
                if (cheb == r) {
                    const std::size_t cell = linear(c);
                    for (std::size_t s = start_[cell]; s < start_[cell + 1]; ++s) {
                        best = std::min(best, squared_distance(q, target_.point(items_[s])));
                        if (best < cutoff2)
                            return best;
                    }
                }
                std::size_t k = 0;
                while (k < dim_ && ++c[k] > hi[k]) {
                    c[k] = lo[k];
                    ++k;
                }
                if (k == dim_)
                    break;
            }
            // Cells of ring r + 1 are at least r * cell_ away from q; the small
            // margin absorbs rounding in the cell assignment.
            const double reach = (static_cast<double>(r) - 1e-6) * cell_;
            if (best <= reach * reach)
                break;
        }
        return best;
    }

private:
    void cell_coords(std::span<const double> p, std::vector<std::int64_t>& out) const
    {
        for (std::size_t k = 0; k < dim_; ++k) {
            const double t = std::floor((p[k] - lo_[k]) / cell_);
            const double clamped = std::clamp(t, 0.0, static_cast<double>(counts_[k] - 1));
            out[k] = static_cast<std::int64_t>(clamped);
        }
    }

    std::size_t linear(const std::vector<std::int64_t>& c) const
    {
        std::size_t idx = 0;
        for (std::size_t k = dim_; k-- > 0;)
            idx = idx * static_cast<std::size_t>(counts_[k]) + static_cast<std::size_t>(c[k]);
        return idx;
    }

    const PointSet& target_;
    std::size_t dim_;
    std::vector<double> lo_;
    double cell_ = 1.0;
    std::vector<std::int64_t> counts_;
    std::vector<std::size_t> start_;
    std::vector<std::size_t> items_;
};

constexpr std::size_t kMaxGridDim = 3;

double directed_squared(const PointSet& a, const PointSet& b)
{
    if (a.dim() > kMaxGridDim)
        return directed_brute_squared(a, b);
    const Grid grid(b);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        // Points whose nearest neighbour is closer than the running maximum
        // cannot change it; their search may stop early.
        const double d2 = grid.nearest_squared(a.point(i), worst);
        if (d2 > worst)
            worst = d2;
    }
    return worst;
}

} // namespace

double directed_hausdorff(const PointSet& a, const PointSet& b)
{
    require_same_dim(a, b);
    return std::sqrt(directed_squared(a, b));
}

double hausdorff(const PointSet& a, const PointSet& b)
{
    require_same_dim(a, b);
    return std::sqrt(std::max(directed_squared(a, b), directed_squared(b, a)));
}

double hausdorff_brute_force(const PointSet& a, const PointSet& b)
{
    require_same_dim(a, b);
    return std::sqrt(std::max(directed_brute_squared(a, b), directed_brute_squared(b, a)));
}

} // namespace ifsseq
