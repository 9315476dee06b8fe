#include "ifsseq/attractor.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ifsseq/error.hpp"

namespace ifsseq {

double default_resolution(std::size_t dim)
{
    return dim <= 1 ? 1e-4 : 1e-3;
}

PointSet default_seed(const Ifs& s, double resolution)
{
    const auto vertices = s.domain().vertices();
    return PointSet::from_points(vertices, resolution);
}

PointSet hutchinson(const Ifs& s, const PointSet& b)
{
    if (b.dim() != s.dim())
        throw InputError("hutchinson: point set has dimension " + std::to_string(b.dim()) + ", IFS has " +
                         std::to_string(s.dim()));
    const double tol = 0.5 * b.resolution() * (1.0 + 1e-9);
    const std::size_t d = s.dim();
    for (std::size_t i = 0; i < b.size(); ++i)
        if (!s.domain().contains(b.point(i), tol))
            throw InputError("hutchinson: point " + std::to_string(i) + " lies outside the domain");

    std::vector<double> out(s.size() * b.size() * d);
    std::size_t pos = 0;
    for (const AffineMap& f : s.maps()) {
        for (std::size_t i = 0; i < b.size(); ++i) {
            f.apply(b.point(i), std::span<double>(out.data() + pos, d));
            pos += d;
        }
    }
    return PointSet(d, b.resolution(), out);
}

PointSet attractor_points(const Ifs& s, std::size_t depth, const PointSet& seed, std::size_t point_cap)
{
    PointSet current = seed;
    for (std::size_t k = 0; k < depth; ++k) {
        if (current.size() > point_cap / s.size())
            throw ResourceError("attractor: iteration " + std::to_string(k + 1) + " would produce " +
                                std::to_string(current.size() * s.size()) + " points (cap " +
                                std::to_string(point_cap) + "); raise the resolution or lower the depth");
        current = hutchinson(s, current);
    }
    return current;
}

double render_error_bound(const Ifs& s, std::size_t depth, const PointSet& seed)
{
    const double t = s.contractivity();
    const double h0 = hausdorff(seed, hutchinson(s, seed));
    return std::pow(t, static_cast<double>(depth)) / (1.0 - t) * h0;
}

std::size_t depth_for_accuracy(const Ifs& s, const PointSet& seed, double target, std::size_t max_depth)
{
    const double t = s.contractivity();
    const double base = hausdorff(seed, hutchinson(s, seed)) / (1.0 - t);
    double bound = base;
    std::size_t k = 0;
    while (bound >= target && k < max_depth) {
        bound *= t;
        ++k;
    }
    return k;
}

PointSet chaos_game(const Ifs& s, std::size_t count, std::size_t burn_in, std::uint64_t rng_seed, double resolution)
{
    if (count == 0)
        throw InputError("chaos_game: count must be positive");
    std::mt19937_64 rng(rng_seed);
    std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
    const std::size_t d = s.dim();
    Vector x = 0.5 * (s.domain().lo() + s.domain().hi());
    Vector y(x.size());
    std::vector<double> kept;
    kept.reserve(count * d);
    for (std::size_t step = 0; step < burn_in + count; ++step) {
        s.map(pick(rng)).apply(std::span<const double>(x.data(), d), std::span<double>(y.data(), d));
        std::swap(x, y);
        if (step >= burn_in)
            kept.insert(kept.end(), x.data(), x.data() + d);
    }
    return PointSet(d, resolution, kept);
}

Vector code_point(const Ifs& s, const Address& addr, const Vector& x)
{
    if (static_cast<std::size_t>(x.size()) != s.dim())
        throw InputError("code_point: dimension mismatch");
    if (!s.domain().contains(x, 1e-12))
        throw InputError("code_point: point outside the domain");
    Vector y = x;
    for (std::size_t sym : addr.symbols) {
        if (sym >= s.size())
            throw InputError("code_point: symbol " + std::to_string(sym + 1) + " exceeds arity " +
                             std::to_string(s.size()));
        y = s.map(sym)(y);
    }
    return y;
}

AttractorConvergence attractor_convergence_report(const IfsSequence& seq, const Ifs& s, std::size_t depth,
                                                  double resolution)
{
    require_comparable(seq[0], s);
    const PointSet seed = default_seed(s, resolution);
    const PointSet reference = attractor_points(s, depth, seed);
    const double reference_bound = render_error_bound(s, depth, seed);

    AttractorConvergence out;
    for (const Ifs& term : seq.terms()) {
        const PointSet rendered = attractor_points(term, depth, seed);
        out.distances.push_back(hausdorff(rendered, reference));
        out.bounds.push_back(render_error_bound(term, depth, seed) + reference_bound + 2.0 * resolution);
    }
    return out;
}

} // namespace ifsseq
