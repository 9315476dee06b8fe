#include "ifsseq/collage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "ifsseq/error.hpp"

namespace ifsseq {

double collage_distance(const Ifs& s, const PointSet& target)
{
    return hausdorff(target, hutchinson(s, target));
}

double collage_bound(double eps, double t)
{
    if (!(t >= 0.0 && t < 1.0))
        throw InputError("collage_bound: contractivity must lie in [0, 1)");
    if (!(eps >= 0.0))
        throw InputError("collage_bound: collage distance must be non-negative");
    return eps / (1.0 - t);
}

void FitConfig::validate() const
{
    if (n == 0)
        throw InputError("fit: n must be at least 1");
    if (restarts == 0)
        throw InputError("fit: restarts must be at least 1");
    if (!(s_max > 0.0 && s_max < 1.0))
        throw InputError("fit: s_max must lie in (0, 1)");
    if (!(initial_step > 0.0))
        throw InputError("fit: initial step must be positive");
    if (!(decay > 0.0 && decay < 1.0))
        throw InputError("fit: decay must lie in (0, 1)");
    if (!(min_step > 0.0))
        throw InputError("fit: min_step must be positive");
}

AffineMap project_to_domain(const AffineMap& f, const Box& domain, double s_max)
{
    const auto d = static_cast<Eigen::Index>(domain.dim());
    Matrix a = clamp_singular_values(f.linear(), s_max);
    Vector b = f.offset();
    const Vector width = domain.hi() - domain.lo();
    for (Eigen::Index i = 0; i < d; ++i) {
        double extent = 0.0;
        for (Eigen::Index j = 0; j < d; ++j)
            extent += std::abs(a(i, j)) * width[j];
        if (extent > width[i])
            a.row(i) *= extent > 0.0 ? width[i] / extent : 0.0;
        double low = 0.0, high = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double p = a(i, j) * domain.lo()[j];
            const double q = a(i, j) * domain.hi()[j];
            low += std::min(p, q);
            high += std::max(p, q);
        }
        // Image along axis i is [b + low, b + high]; keep it inside [lo, hi].
        const double b_min = domain.lo()[i] - low;
        const double b_max = domain.hi()[i] - high;
        b[i] = b_min <= b_max ? std::clamp(b[i], b_min, b_max) : 0.5 * (b_min + b_max);
    }
    return AffineMap(std::move(a), std::move(b));
}

namespace {

using Params = std::vector<double>;

std::size_t params_per_map(std::size_t d) { return d * d + d; }

Params to_params(const Ifs& s)
{
    const std::size_t d = s.dim();
    Params p;
    p.reserve(s.size() * params_per_map(d));
    for (const AffineMap& f : s.maps()) {
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                p.push_back(f.linear()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
        for (std::size_t r = 0; r < d; ++r)
            p.push_back(f.offset()[static_cast<Eigen::Index>(r)]);
    }
    return p;
}

// Projects the parameters in place and returns the corresponding IFS.
Ifs from_params(Params& p, const Box& domain, double s_max)
{
    const std::size_t d = domain.dim();
    const auto de = static_cast<Eigen::Index>(d);
    const std::size_t per = params_per_map(d);
    const std::size_t n = p.size() / per;
    std::vector<AffineMap> maps;
    maps.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Matrix a(de, de);
        Vector b(de);
        const double* q = p.data() + k * per;
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = q[r * d + c];
        for (std::size_t r = 0; r < d; ++r)
            b[static_cast<Eigen::Index>(r)] = q[d * d + r];
        maps.push_back(project_to_domain(AffineMap(std::move(a), std::move(b)), domain, s_max));
    }
    Ifs s(domain, std::move(maps));
    p = to_params(s);
    return s;
}

double squared(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += (a[k] - b[k]) * (a[k] - b[k]);
    return s;
}

// Lloyd iterations from the given centres; returns the cluster label of every point.
std::vector<std::size_t> lloyd(const PointSet& pts, std::vector<std::vector<double>>& centres)
{
    const std::size_t d = pts.dim();
    const std::size_t k = centres.size();
    std::vector<std::size_t> label(pts.size(), 0);
    for (int iter = 0; iter < 25; ++iter) {
        bool changed = iter == 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double dist = squared(pts.point(i), centres[c]);
                if (dist < best_d) {
                    best_d = dist;
                    best = c;
                }
            }
            if (label[i] != best) {
                label[i] = best;
                changed = true;
            }
        }
        if (!changed)
            break;
        std::vector<std::vector<double>> sum(k, std::vector<double>(d, 0.0));
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto p = pts.point(i);
            for (std::size_t a = 0; a < d; ++a)
                sum[label[i]][a] += p[a];
            ++count[label[i]];
        }
        for (std::size_t c = 0; c < k; ++c)
            if (count[c] > 0)
                for (std::size_t a = 0; a < d; ++a)
                    centres[c][a] = sum[c][a] / static_cast<double>(count[c]);
    }
    return label;
}

std::vector<std::vector<double>> farthest_point_centres(const PointSet& pts, std::size_t k)
{
    std::vector<std::vector<double>> centres;
    std::vector<double> nearest(pts.size(), std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const auto p = pts.point(next);
        centres.emplace_back(p.begin(), p.end());
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            nearest[i] = std::min(nearest[i], squared(pts.point(i), centres.back()));
            if (nearest[i] > far_d) {
                far_d = nearest[i];
                far = i;
            }
        }
        next = far;
    }
    return centres;
}

std::vector<std::vector<double>> plus_plus_centres(const PointSet& pts, std::size_t k, std::mt19937_64& rng)
{
    std::vector<std::vector<double>> centres;
    std::uniform_int_distribution<std::size_t> first(0, pts.size() - 1);
    auto p0 = pts.point(first(rng));
    centres.emplace_back(p0.begin(), p0.end());
    std::vector<double> nearest(pts.size(), std::numeric_limits<double>::infinity());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (centres.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            nearest[i] = std::min(nearest[i], squared(pts.point(i), centres.back()));
            total += nearest[i];
        }
        std::size_t pick = pts.size() - 1;
        if (total > 0.0) {
            double r = unit(rng) * total;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                r -= nearest[i];
                if (r <= 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = first(rng);
        }
        auto p = pts.point(pick);
        centres.emplace_back(p.begin(), p.end());
    }
    return centres;
}

// One map per cluster, sending the target's bounding box onto the cluster's
// bounding box with a positive diagonal scaling.
Params cluster_params(const PointSet& target, const std::vector<std::size_t>& label, std::size_t k,
                      const std::vector<std::vector<double>>& centres)
{
    const std::size_t d = target.dim();
    const Box whole = target.bounding_box();
    std::vector<std::vector<double>> lo(k, std::vector<double>(d, std::numeric_limits<double>::infinity()));
    std::vector<std::vector<double>> hi(k, std::vector<double>(d, -std::numeric_limits<double>::infinity()));
    for (std::size_t i = 0; i < target.size(); ++i) {
        const auto p = target.point(i);
        for (std::size_t a = 0; a < d; ++a) {
            lo[label[i]][a] = std::min(lo[label[i]][a], p[a]);
            hi[label[i]][a] = std::max(hi[label[i]][a], p[a]);
        }
    }
    Params params;
    for (std::size_t c = 0; c < k; ++c) {
        const bool empty = lo[c][0] > hi[c][0];
        std::vector<double> scale(d, 0.0), shift(d, 0.0);
        for (std::size_t a = 0; a < d; ++a) {
            const auto e = static_cast<Eigen::Index>(a);
            const double tw = whole.hi()[e] - whole.lo()[e];
            const double clo = empty ? centres[c][a] : lo[c][a];
            const double chi = empty ? centres[c][a] : hi[c][a];
            scale[a] = tw > 0.0 ? (chi - clo) / tw : 0.0;
            shift[a] = clo - scale[a] * whole.lo()[e];
        }
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t col = 0; col < d; ++col)
                params.push_back(r == col ? scale[r] : 0.0);
        for (std::size_t r = 0; r < d; ++r)
            params.push_back(shift[r]);
    }
    return params;
}

struct Candidate {
    Ifs ifs;
    double objective;
    std::vector<double> trace;
};

Candidate descend(Params p, const PointSet& target, const Box& domain, const FitConfig& cfg)
{
    const std::size_t d = domain.dim();
    const std::size_t per = params_per_map(d);
    const double diameter = std::max(domain.diameter(), target.resolution());

    Ifs current = from_params(p, domain, cfg.s_max);
    double best = collage_distance(current, target);
    std::vector<double> trace{best};

    double step = cfg.initial_step;
    for (std::size_t sweep = 0; sweep < cfg.max_iters && step >= cfg.min_step; ++sweep) {
        bool improved = false;
        for (std::size_t c = 0; c < p.size(); ++c) {
            const double scale = (c % per) < d * d ? 1.0 : diameter;
            for (const double sign : {1.0, -1.0}) {
                Params trial = p;
                trial[c] += sign * step * scale;
                Ifs candidate = from_params(trial, domain, cfg.s_max);
                if (trial == p)
                    continue;
                const double value = collage_distance(candidate, target);
                if (value < best) {
                    best = value;
                    p = std::move(trial);
                    current = std::move(candidate);
                    trace.push_back(best);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved)
            step *= cfg.decay;
    }
    return {std::move(current), best, std::move(trace)};
}

Ifs constant_baseline(const PointSet& target, const Box& domain, std::size_t n)
{
    auto centres = farthest_point_centres(target, n);
    lloyd(target, centres);
    std::vector<AffineMap> maps;
    for (const auto& c : centres) {
        Vector v = Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
        for (Eigen::Index a = 0; a < v.size(); ++a)
            v[a] = std::clamp(v[a], domain.lo()[a], domain.hi()[a]);
        maps.push_back(AffineMap::constant(v));
    }
    return Ifs(domain, std::move(maps));
}

} // namespace

FitResult fit_ifs(const PointSet& target, const Box& domain, const FitConfig& cfg, const std::optional<Ifs>& warm_start)
{
    cfg.validate();
    if (target.dim() != domain.dim())
        throw InputError("fit: target dimension does not match the domain");
    const double tol = 0.5 * target.resolution() * (1.0 + 1e-9);
    for (std::size_t i = 0; i < target.size(); ++i)
        if (!domain.contains(target.point(i), tol))
            throw InputError("fit: target point " + std::to_string(i) + " lies outside the domain");
    if (warm_start && (warm_start->size() != cfg.n || warm_start->dim() != domain.dim()))
        throw ArityMismatch("fit: warm start has the wrong arity or dimension");

    std::mt19937_64 rng(cfg.seed);
    std::optional<Candidate> best;
    std::size_t best_restart = 0;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        Params start;
        if (r == 0 && warm_start) {
            start = to_params(*warm_start);
        } else if (r == 0 || (r == 1 && warm_start)) {
            auto centres = farthest_point_centres(target, cfg.n);
            const auto label = lloyd(target, centres);
            start = cluster_params(target, label, cfg.n, centres);
        } else {
            auto centres = plus_plus_centres(target, cfg.n, rng);
            const auto label = lloyd(target, centres);
            start = cluster_params(target, label, cfg.n, centres);
            std::uniform_real_distribution<double> jitter(-0.05, 0.05);
            const std::size_t d = domain.dim();
            const double diameter = domain.diameter();
            for (std::size_t c = 0; c < start.size(); ++c)
                start[c] += jitter(rng) * ((c % params_per_map(d)) < d * d ? 1.0 : diameter);
        }
        Candidate cand = descend(std::move(start), target, domain, cfg);
        if (!best || cand.objective < best->objective) {
            best = std::move(cand);
            best_restart = r;
        }
    }

    Ifs baseline = constant_baseline(target, domain, cfg.n);
    const double baseline_value = collage_distance(baseline, target);
    if (best->objective > baseline_value)
        return {std::move(baseline), baseline_value, true, best_restart, {baseline_value}};
    return {std::move(best->ifs), best->objective, false, best_restart, std::move(best->trace)};
}

FittedSequence fit_sequence(std::span<const PointSet> targets, const Box& domain, const FitConfig& cfg)
{
    if (targets.empty())
        throw InputError("fit_sequence: at least one frame is required");
    std::vector<Ifs> fits;
    std::vector<double> distances;
    std::vector<char> baseline;
    std::optional<Ifs> previous;
    for (std::size_t j = 0; j < targets.size(); ++j) {
        try {
            FitResult r = fit_ifs(targets[j], domain, cfg, previous);
            distances.push_back(r.collage_distance);
            baseline.push_back(r.baseline);
            previous = r.ifs;
            fits.push_back(std::move(r.ifs));
        } catch (const InputError& e) {
            throw InputError("frame " + std::to_string(j + 1) + ": " + e.what());
        }
    }
    return {align_chain(IfsSequence(std::move(fits))), std::move(distances), std::move(baseline)};
}

namespace {

constexpr double kSeriesTol = 1e-12;

double least_squares_slope(std::span<const double> y)
{
    const auto m = static_cast<double>(y.size());
    const double mean_j = 0.5 * (m - 1.0);
    double mean_y = 0.0;
    for (double v : y)
        mean_y += v;
    mean_y /= m;
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        const double dj = static_cast<double>(j) - mean_j;
        num += dj * (y[j] - mean_y);
        den += dj * dj;
    }
    return den > 0.0 ? num / den : 0.0;
}

double predict(std::span<const double> y, const ExtrapolationModel& model, bool& fell_back)
{
    const double last = y.back();
    const auto h = static_cast<double>(model.horizon);
    switch (model.kind) {
    case ExtrapolationKind::HoldLast:
        return last;
    case ExtrapolationKind::Linear:
        return last + least_squares_slope(y) * h;
    case ExtrapolationKind::Geometric: {
        const std::size_t m = y.size();
        const double d1 = y[m - 2] - y[m - 3];
        const double d2 = y[m - 1] - y[m - 2];
        if (std::abs(d1) <= kSeriesTol && std::abs(d2) <= kSeriesTol)
            return last;
        const double rho = std::abs(d1) <= kSeriesTol ? std::numeric_limits<double>::infinity() : d2 / d1;
        if (!(std::abs(rho) < 1.0)) {
            fell_back = true;
            return last + least_squares_slope(y) * h;
        }
        const double limit = last + d2 * rho / (1.0 - rho);
        return limit + (last - limit) * std::pow(rho, h);
    }
    }
    return last;
}

} // namespace

Extrapolation extrapolate(const IfsSequence& seq, const ExtrapolationModel& model, double s_max)
{
    if (!(s_max > 0.0 && s_max < 1.0))
        throw InputError("extrapolate: s_max must lie in (0, 1)");
    const std::size_t needed = model.kind == ExtrapolationKind::Geometric ? 3 : 2;
    if (seq.size() < needed && model.kind != ExtrapolationKind::HoldLast)
        throw PreconditionError("extrapolate: the model needs at least " + std::to_string(needed) + " terms");
    if (model.horizon == 0 || model.kind == ExtrapolationKind::HoldLast)
        return {seq.back(), {}};

    const IfsSequence aligned = seq.aligned() ? seq : align_chain(seq);
    std::vector<Params> series;
    for (const Ifs& term : aligned.terms())
        series.push_back(to_params(term));

    const std::size_t d = aligned[0].dim();
    const std::size_t per = params_per_map(d);
    Params out(series.front().size());
    std::vector<std::string> warnings;
    std::vector<double> y(series.size());
    for (std::size_t c = 0; c < out.size(); ++c) {
        for (std::size_t j = 0; j < series.size(); ++j)
            y[j] = series[j][c];
        bool fell_back = false;
        out[c] = predict(y, model, fell_back);
        if (fell_back)
            warnings.push_back("slot " + std::to_string(c / per + 1) + " coefficient " +
                               std::to_string(c % per + 1) + ": geometric ratio |rho| >= 1, used linear");
    }
    Ifs ifs = from_params(out, aligned[0].domain(), s_max);
    return {std::move(ifs), std::move(warnings)};
}

} // namespace ifsseq
