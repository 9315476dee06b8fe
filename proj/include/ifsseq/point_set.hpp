#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ifsseq/metric_core.hpp"

namespace ifsseq {

/// Finite nonempty point set in R^d, snapped to the grid of pitch
/// `resolution` (coordinates are integer multiples of it) and deduplicated.
/// Points are stored in lexicographic order of their grid keys, so equal sets
/// have identical storage regardless of how they were built.
class PointSet {
public:
    /// Snaps `coords` (row-major, `dim` values per point) and deduplicates.
    /// Throws InputError for an empty input, dim == 0, a non-positive
    /// resolution or coordinates too large for the snap grid.
    PointSet(std::size_t dim, double resolution, std::span<const double> coords);

    static PointSet from_points(std::span<const Vector> points, double resolution);

    std::size_t dim() const { return dim_; }
    double resolution() const { return resolution_; }
    std::size_t size() const { return keys_.size() / dim_; }

    std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    std::span<const std::int64_t> key(std::size_t i) const { return {keys_.data() + i * dim_, dim_}; }
    const std::vector<double>& coords() const { return coords_; }

    /// Smallest box containing every point.
    Box bounding_box() const;

    bool operator==(const PointSet& other) const
    {
        return dim_ == other.dim_ && resolution_ == other.resolution_ && keys_ == other.keys_;
    }

private:
    std::size_t dim_;
    double resolution_;
    std::vector<std::int64_t> keys_;
    std::vector<double> coords_;
};

/// One-sided distance sup_{a in A} min_{b in B} |a - b|.
double directed_hausdorff(const PointSet& a, const PointSet& b);

/// Hausdorff distance max(directed(A, B), directed(B, A)), computed with a
/// uniform-grid bucketing of each target set. Throws InputError on dimension
/// mismatch.
double hausdorff(const PointSet& a, const PointSet& b);

/// O(|A||B|) reference for `hausdorff`; returns bit-identical results.
double hausdorff_brute_force(const PointSet& a, const PointSet& b);

} // namespace ifsseq
