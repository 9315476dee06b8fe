#include "cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ifsseq/attractor.hpp"
#include "ifsseq/collage.hpp"
#include "ifsseq/error.hpp"
#include "ifsseq/io.hpp"
#include "ifsseq/rational.hpp"

namespace ifsseq::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string describe_map(const AffineMap& f)
{
    const auto d = static_cast<Eigen::Index>(f.dim());
    std::string s = "A = [";
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c)
            s += (c ? " " : "") + num(f.linear()(r, c));
        if (r + 1 < d)
            s += "; ";
    }
    s += "], b = [";
    for (Eigen::Index r = 0; r < d; ++r)
        s += (r ? " " : "") + num(f.offset()[r]);
    return s + "]";
}

void print_maps(const Ifs& s, std::ostream& out)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        out << "  map " << i + 1 << ": " << describe_map(s.map(i)) << "\n";
}

json input_entry(const fs::path& p)
{
    std::error_code ec;
    const auto size = fs::is_regular_file(p, ec) ? fs::file_size(p, ec) : 0;
    return {{"path", p.string()}, {"bytes", size}};
}

json base_manifest(const std::string& command)
{
    return {{"tool", "ifsseq"}, {"version", kVersion}, {"compiler", __VERSION__}, {"command", command}};
}

void write_manifest(const fs::path& path, const json& manifest)
{
    io::write_file_atomic(path, manifest.dump(2) + "\n");
}

void ensure_parent(const fs::path& p)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
}

bool has_ext(const fs::path& p, const char* ext)
{
    std::string e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return e == ext;
}

std::string format_raster(const io::Raster& r, const fs::path& p)
{
    return has_ext(p, ".pbm") ? io::format_pbm(r) : io::format_pgm(r);
}

double image_pitch(const Box& domain, std::optional<std::size_t> px, double fallback)
{
    if (!px)
        return fallback;
    if (*px < 2)
        throw InputError("--px must be at least 2");
    const double longest = (domain.hi() - domain.lo()).maxCoeff();
    return longest > 0.0 ? longest / static_cast<double>(*px - 1) : fallback;
}

struct Target {
    PointSet points;
    Box domain;
    std::optional<double> pitch; ///< raster pixel pitch
    std::size_t width = 0, height = 0;
};

Target load_target(const fs::path& path, std::optional<unsigned> threshold, std::optional<double> resolution)
{
    if (has_ext(path, ".csv")) {
        PointSet pts = io::read_points_csv(path, resolution.value_or(default_resolution(1)));
        if (!resolution && pts.dim() > 1)
            pts = PointSet(pts.dim(), default_resolution(pts.dim()), pts.coords());
        Box box = pts.bounding_box();
        return {std::move(pts), std::move(box), std::nullopt, 0, 0};
    }
    const io::Raster raster = io::read_raster(path);
    io::Ingested in = io::raster_to_points(raster, threshold);
    const double pitch = in.points.resolution();
    return {std::move(in.points), std::move(in.domain), pitch, raster.width, raster.height};
}

FitConfig fit_config(std::size_t n, std::size_t restarts, std::size_t max_iters, double s_max, std::uint64_t seed)
{
    FitConfig cfg;
    cfg.n = n;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.s_max = s_max;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

json fit_config_json(const FitConfig& cfg)
{
    return {{"n", cfg.n},
            {"restarts", cfg.restarts},
            {"max_iters", cfg.max_iters},
            {"initial_step", cfg.initial_step},
            {"decay", cfg.decay},
            {"min_step", cfg.min_step},
            {"s_max", cfg.s_max},
            {"seed", cfg.seed}};
}

ExtrapolationKind parse_model(const std::string& name)
{
    if (name == "last" || name == "hold")
        return ExtrapolationKind::HoldLast;
    if (name == "linear")
        return ExtrapolationKind::Linear;
    if (name == "geometric")
        return ExtrapolationKind::Geometric;
    throw InputError("unknown model '" + name + "' (expected last, linear or geometric)");
}

template <class F>
auto with_frame(std::size_t k, const fs::path& p, F&& f)
{
    const std::string where = "frame " + std::to_string(k + 1) + " (" + p.string() + "): ";
    try {
        return f();
    } catch (const ResourceError& e) {
        throw ResourceError(where + e.what());
    } catch (const InputError& e) {
        throw InputError(where + e.what());
    }
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string index_or(const std::optional<std::size_t>& i, const char* none)
{
    return i ? std::to_string(*i + 1) : std::string(none);
}

} // namespace

SeedChoice resolve_seed(std::optional<std::uint64_t> flag)
{
    if (flag)
        return {*flag, "flag"};
    if (const char* env = std::getenv("IFSSEQ_SEED"); env && *env) {
        const std::string s = env;
        if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 19)
            throw InputError("IFSSEQ_SEED must be a non-negative integer, got '" + s + "'");
        return {std::stoull(s), "env"};
    }
    return {};
}

void cmd_dist(const DistOptions& o, std::ostream& out)
{
    const Ifs a = io::read_ifs_file(o.a);
    const Ifs b = io::read_ifs_file(o.b);
    require_comparable(a, b);
    const CostMatrix costs = cost_matrix(a, b);
    const Matching m = optimal_matching(costs);
    out << "D = " << format_exact(m.cost) << ", sigma = " << m.sigma.to_string() << "\n";
    out << "cost matrix (row i: map i of A, column j: map j of B):\n";
    for (std::size_t i = 0; i < costs.size(); ++i) {
        out << " ";
        for (std::size_t j = 0; j < costs.size(); ++j)
            out << " " << format_exact(costs(i, j));
        out << "\n";
    }
}

void cmd_attractor(const AttractorOptions& o, std::ostream& out)
{
    const Ifs s = io::read_ifs_file(o.spec);
    const double delta = o.delta.value_or(default_resolution(s.dim()));
    if (!(delta > 0.0))
        throw InputError("--delta must be positive");
    const PointSet seed = default_seed(s, delta);
    const std::size_t depth = o.depth ? *o.depth : depth_for_accuracy(s, seed, delta);
    const PointSet pts = attractor_points(s, depth, seed, o.point_cap);

    ensure_parent(o.out);
    io::write_file_atomic(o.out, io::format_points_csv(pts));
    json outputs = json::array({o.out.string()});
    if (o.image) {
        if (s.dim() > 2)
            throw InputError("--image needs a 1-d or 2-d IFS");
        const double pitch = image_pitch(s.domain(), o.px, delta);
        const io::Raster r = io::points_to_raster(pts, s.domain(), pitch);
        ensure_parent(*o.image);
        io::write_file_atomic(*o.image, format_raster(r, *o.image));
        outputs.push_back(o.image->string());
        out << "image: " << o.image->string() << " (" << r.width << "x" << r.height << ")\n";
    }
    out << "points = " << pts.size() << ", depth = " << depth << ", delta = " << num(delta)
        << ", render bound = " << num(render_error_bound(s, depth, seed)) << "\n";
    out << "wrote " << o.out.string() << "\n";

    json m = base_manifest("attractor");
    m["flags"] = {{"spec", o.spec.string()},
                  {"depth", o.depth ? json(*o.depth) : json(nullptr)},
                  {"delta", o.delta ? json(*o.delta) : json(nullptr)},
                  {"out", o.out.string()},
                  {"image", o.image ? json(o.image->string()) : json(nullptr)},
                  {"px", o.px ? json(*o.px) : json(nullptr)}};
    m["resolved"] = {{"depth", depth}, {"delta", delta}, {"points", pts.size()}};
    m["inputs"] = json::array({input_entry(o.spec)});
    m["outputs"] = outputs;
    write_manifest(fs::path(o.out.string() + ".manifest.json"), m);
}

void cmd_analyze(const AnalyzeOptions& o, std::ostream& out)
{
    const IfsSequence seq = io::read_sequence_file(o.sequence);
    const SequenceReport r = o.require_limit ? limit_candidate(seq, o.eps) : analyze_sequence(seq, o.eps);

    out << "terms = " << seq.size() << ", maps per term = " << seq.arity() << ", eps = " << num(o.eps) << "\n";
    out << "alignment:\n";
    for (std::size_t j = 0; j < r.aligned.size(); ++j)
        out << "  term " << j + 1 << ": " << r.aligned.alignment()[j].to_string() << "\n";
    if (!r.consecutive_distances.empty()) {
        out << "consecutive D:";
        for (double d : r.consecutive_distances)
            out << " " << format_decimal(d);
        out << "\n";
    }
    for (std::size_t i = 0; i < r.factor_traces.size(); ++i) {
        out << "contractivity slot " << i + 1 << ":";
        for (double t : r.factor_traces[i])
            out << " " << format_decimal(t);
        out << "\n";
    }
    out << "decreasing: " << yes_no(r.decreasing) << "\n";
    out << "eventually decreasing from term: " << index_or(r.eventually_decreasing_at, "never") << "\n";
    out << "cauchy from term: " << index_or(r.cauchy_at, "none within prefix") << "\n";
    out << "minimally ordered set: " << yes_no(r.transitive) << "\n";
    if (r.limit) {
        out << "limit candidate (tail from term " << index_or(r.tail_start, "?") << "):\n";
        print_maps(*r.limit, out);
        out << "residual = " << format_exact(r.residual) << "\n";
        if (o.limit_out) {
            ensure_parent(*o.limit_out);
            io::write_ifs_file(*o.limit_out, *r.limit);
            out << "wrote " << o.limit_out->string() << "\n";
        }
    } else {
        out << "limit candidate: none\n";
    }
    for (const std::string& note : r.notes)
        out << "note: " << note << "\n";
}

void cmd_collage_fit(const CollageFitOptions& o, std::ostream& out)
{
    const SeedChoice seed = resolve_seed(o.seed);
    const FitConfig cfg = fit_config(o.n, o.restarts, o.max_iters, o.s_max, seed.value);
    const Target target = load_target(o.input, o.threshold, o.resolution);
    const FitResult fit = fit_ifs(target.points, target.domain, cfg);
    const double t = fit.ifs.contractivity();

    ensure_parent(o.out);
    io::write_ifs_file(o.out, fit.ifs);

    out << "target: " << target.points.size() << " points in " << target.points.dim() << "-d, pitch "
        << num(target.points.resolution()) << "\n";
    out << "collage distance = " << format_decimal(fit.collage_distance) << "\n";
    out << "contractivity = " << format_decimal(t) << "\n";
    out << "collage bound = " << format_decimal(collage_bound(fit.collage_distance, t)) << "\n";
    out << "restart = " << fit.restart << (fit.baseline ? " (constant baseline)" : "") << ", seed = " << seed.value
        << " (" << seed.source << ")\n";
    print_maps(fit.ifs, out);
    out << "wrote " << o.out.string() << "\n";

    json m = base_manifest("collage-fit");
    m["flags"] = {{"input", o.input.string()},
                  {"n", o.n},
                  {"seed", o.seed ? json(*o.seed) : json(nullptr)},
                  {"restarts", o.restarts},
                  {"max_iters", o.max_iters},
                  {"s_max", o.s_max},
                  {"threshold", o.threshold ? json(*o.threshold) : json(nullptr)},
                  {"resolution", o.resolution ? json(*o.resolution) : json(nullptr)},
                  {"out", o.out.string()}};
    m["seed"] = {{"value", seed.value}, {"source", seed.source}};
    m["config"] = fit_config_json(cfg);
    m["result"] = {{"collage_distance", fit.collage_distance},
                   {"contractivity", t},
                   {"restart", fit.restart},
                   {"baseline", fit.baseline}};
    m["inputs"] = json::array({input_entry(o.input)});
    m["outputs"] = json::array({o.out.string()});
    write_manifest(fs::path(o.out.string() + ".manifest.json"), m);
}

void cmd_predict(const PredictOptions& o, std::ostream& out)
{
    const SeedChoice seed = resolve_seed(o.seed);
    const FitConfig cfg = fit_config(o.n, o.restarts, o.max_iters, o.s_max, seed.value);
    const ExtrapolationModel model{parse_model(o.model), o.horizon};

    std::vector<fs::path> frames;
    std::optional<IfsSequence> seq;
    std::vector<double> collage;
    std::optional<double> frame_pitch;
    std::optional<Box> frame_domain;

    if (fs::is_directory(o.input)) {
        for (const auto& entry : fs::directory_iterator(o.input)) {
            const fs::path& p = entry.path();
            if (entry.is_regular_file() && (has_ext(p, ".pbm") || has_ext(p, ".pgm") || has_ext(p, ".csv")))
                frames.push_back(p);
        }
        std::sort(frames.begin(), frames.end());
        if (frames.size() < 2)
            throw InputError(o.input.string() + ": need at least 2 frames (.pbm, .pgm or .csv), found " +
                             std::to_string(frames.size()));
        std::vector<PointSet> targets;
        std::optional<Box> domain;
        std::size_t width = 0, height = 0;
        for (std::size_t k = 0; k < frames.size(); ++k) {
            Target t = with_frame(k, frames[k], [&] { return load_target(frames[k], o.threshold, o.resolution); });
            if (k == 0) {
                domain = t.domain;
                frame_pitch = t.pitch;
                width = t.width;
                height = t.height;
            } else if (t.pitch.has_value() != frame_pitch.has_value() || t.width != width || t.height != height ||
                       t.points.dim() != targets.front().dim()) {
                throw InputError("frame " + std::to_string(k + 1) + " (" + frames[k].string() +
                                 "): size or format differs from frame 1");
            }
            if (!t.pitch) {
                // CSV frames share the bounding box of all frames.
                const Box& b = t.domain;
                domain = Box(domain->lo().cwiseMin(b.lo()), domain->hi().cwiseMax(b.hi()));
            }
            targets.push_back(std::move(t.points));
        }
        frame_domain = domain;
        FittedSequence fitted = fit_sequence(targets, *domain, cfg);
        collage = fitted.collage_distances;
        seq.emplace(std::move(fitted.sequence));
    } else {
        frames.push_back(o.input);
        const IfsSequence raw = io::read_sequence_file(o.input);
        if (raw.size() < 2)
            throw InputError(o.input.string() + ": need at least 2 terms");
        seq.emplace(align_chain(raw));
    }

    const Extrapolation pred = extrapolate(*seq, model, o.s_max);
    const Ifs& s = pred.ifs;
    const double delta = o.delta.value_or(frame_pitch.value_or(default_resolution(s.dim())));
    if (!(delta > 0.0))
        throw InputError("--delta must be positive");
    const PointSet render_seed = default_seed(s, delta);
    const std::size_t depth = o.depth ? *o.depth : depth_for_accuracy(s, render_seed, delta);
    const PointSet pts = attractor_points(s, depth, render_seed);

    fs::create_directories(o.out);
    const fs::path spec_path = o.out / "predicted.json";
    const fs::path fits_path = o.out / "fits.json";
    const fs::path points_path = o.out / "attractor.csv";
    io::write_ifs_file(spec_path, s);
    io::write_file_atomic(fits_path, io::format_sequence(*seq));
    io::write_file_atomic(points_path, io::format_points_csv(pts));
    json outputs = json::array({spec_path.string(), fits_path.string(), points_path.string()});
    if (s.dim() <= 2) {
        const fs::path image_path = o.out / "attractor.pgm";
        io::write_file_atomic(image_path, io::format_pgm(io::points_to_raster(pts, s.domain(), delta)));
        outputs.push_back(image_path.string());
    }

    out << "frames = " << seq->size() << ", model = " << o.model << ", horizon = " << o.horizon << "\n";
    for (std::size_t k = 0; k < collage.size(); ++k)
        out << "  frame " << k + 1 << ": collage distance = " << format_decimal(collage[k]) << "\n";
    for (const std::string& w : pred.warnings)
        out << "warning: " << w << "\n";
    out << "predicted IFS:\n";
    print_maps(s, out);
    out << "attractor: " << pts.size() << " points, depth = " << depth << ", delta = " << num(delta) << "\n";
    out << "wrote " << o.out.string() << "\n";

    json m = base_manifest("predict");
    m["flags"] = {{"input", o.input.string()},
                  {"model", o.model},
                  {"horizon", o.horizon},
                  {"n", o.n},
                  {"seed", o.seed ? json(*o.seed) : json(nullptr)},
                  {"restarts", o.restarts},
                  {"max_iters", o.max_iters},
                  {"s_max", o.s_max},
                  {"threshold", o.threshold ? json(*o.threshold) : json(nullptr)},
                  {"resolution", o.resolution ? json(*o.resolution) : json(nullptr)},
                  {"depth", o.depth ? json(*o.depth) : json(nullptr)},
                  {"delta", o.delta ? json(*o.delta) : json(nullptr)},
                  {"out", o.out.string()}};
    m["seed"] = {{"value", seed.value}, {"source", seed.source}};
    m["config"] = fit_config_json(cfg);
    m["resolved"] = {{"depth", depth}, {"delta", delta}, {"points", pts.size()}};
    m["collage_distances"] = collage;
    m["warnings"] = pred.warnings;
    json inputs = json::array();
    for (const fs::path& f : frames)
        inputs.push_back(input_entry(f));
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    write_manifest(o.out / "manifest.json", m);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Metric space of iterated function systems: distances, sequences, attractors, collage fitting",
                 "ifsseq"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("ifsseq ") + kVersion);

    DistOptions dist;
    auto* dist_cmd = app.add_subcommand("dist", "D distance between two IFS spec files");
    dist_cmd->add_option("A", dist.a, "first IFS spec")->required();
    dist_cmd->add_option("B", dist.b, "second IFS spec")->required();

    AttractorOptions attr;
    std::size_t attr_depth = 0, attr_px = 0;
    double attr_delta = 0.0;
    std::string attr_image;
    auto* attr_cmd = app.add_subcommand("attractor", "render an attractor by iterating the Hutchinson operator");
    attr_cmd->add_option("S", attr.spec, "IFS spec")->required();
    auto* o_depth = attr_cmd->add_option("--depth", attr_depth, "iterations (default: until the bound is below delta)");
    auto* o_delta = attr_cmd->add_option("--delta", attr_delta, "snap resolution");
    attr_cmd->add_option("--out", attr.out, "point CSV output")->capture_default_str();
    auto* o_image = attr_cmd->add_option("--image", attr_image, "raster output (.pgm or .pbm)");
    auto* o_px = attr_cmd->add_option("--px", attr_px, "image pixels along the longest domain side");
    attr_cmd->add_option("--point-cap", attr.point_cap, "maximum points per iteration")->capture_default_str();

    AnalyzeOptions an;
    std::string an_limit;
    auto* an_cmd = app.add_subcommand("analyze", "ordering, Cauchy and limit analysis of an IFS sequence");
    an_cmd->add_option("SEQ", an.sequence, "sequence file")->required();
    an_cmd->add_option("--eps", an.eps, "tolerance")->capture_default_str();
    auto* o_limit = an_cmd->add_option("--limit-out", an_limit, "write the limit candidate spec here");
    an_cmd->add_flag("--require-limit", an.require_limit, "fail with exit code 4 when no limit exists");

    CollageFitOptions cf;
    std::uint64_t cf_seed = 0;
    unsigned cf_threshold = 0;
    double cf_resolution = 0.0;
    auto* cf_cmd = app.add_subcommand("collage-fit", "fit an affine IFS to an image or CSV point set");
    cf_cmd->add_option("IMG", cf.input, "PBM/PGM raster or CSV points")->required();
    cf_cmd->add_option("--n", cf.n, "maps")->capture_default_str();
    auto* o_cf_seed = cf_cmd->add_option("--seed", cf_seed, "rng seed (default: IFSSEQ_SEED or 1)");
    cf_cmd->add_option("--restarts", cf.restarts)->capture_default_str();
    cf_cmd->add_option("--max-iters", cf.max_iters)->capture_default_str();
    cf_cmd->add_option("--s-max", cf.s_max, "contractivity cap")->capture_default_str();
    auto* o_cf_thr = cf_cmd->add_option("--threshold", cf_threshold, "foreground threshold");
    auto* o_cf_res = cf_cmd->add_option("--resolution", cf_resolution, "snap pitch for CSV input");
    cf_cmd->add_option("--out", cf.out, "fitted spec output")->capture_default_str();

    PredictOptions pr;
    std::uint64_t pr_seed = 0;
    unsigned pr_threshold = 0;
    double pr_resolution = 0.0, pr_delta = 0.0;
    std::size_t pr_depth = 0;
    auto* pr_cmd = app.add_subcommand("predict", "fit a frame sequence, extrapolate it and render the result");
    pr_cmd->add_option("DIR", pr.input, "directory of frames, or a sequence file")->required();
    pr_cmd->add_option("--model", pr.model)
        ->check(CLI::IsMember({"last", "hold", "linear", "geometric"}))
        ->capture_default_str();
    pr_cmd->add_option("--horizon", pr.horizon)->capture_default_str();
    pr_cmd->add_option("--n", pr.n, "maps")->capture_default_str();
    auto* o_pr_seed = pr_cmd->add_option("--seed", pr_seed, "rng seed (default: IFSSEQ_SEED or 1)");
    pr_cmd->add_option("--restarts", pr.restarts)->capture_default_str();
    pr_cmd->add_option("--max-iters", pr.max_iters)->capture_default_str();
    pr_cmd->add_option("--s-max", pr.s_max)->capture_default_str();
    auto* o_pr_thr = pr_cmd->add_option("--threshold", pr_threshold, "foreground threshold");
    auto* o_pr_res = pr_cmd->add_option("--resolution", pr_resolution, "snap pitch for CSV frames");
    auto* o_pr_depth = pr_cmd->add_option("--depth", pr_depth, "render depth");
    auto* o_pr_delta = pr_cmd->add_option("--delta", pr_delta, "render resolution");
    pr_cmd->add_option("--out", pr.out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*dist_cmd) {
            cmd_dist(dist, out);
        } else if (*attr_cmd) {
            if (*o_depth)
                attr.depth = attr_depth;
            if (*o_delta)
                attr.delta = attr_delta;
            if (*o_image)
                attr.image = attr_image;
            if (*o_px)
                attr.px = attr_px;
            cmd_attractor(attr, out);
        } else if (*an_cmd) {
            if (*o_limit)
                an.limit_out = an_limit;
            cmd_analyze(an, out);
        } else if (*cf_cmd) {
            if (*o_cf_seed)
                cf.seed = cf_seed;
            if (*o_cf_thr)
                cf.threshold = cf_threshold;
            if (*o_cf_res)
                cf.resolution = cf_resolution;
            cmd_collage_fit(cf, out);
        } else if (*pr_cmd) {
            if (*o_pr_seed)
                pr.seed = pr_seed;
            if (*o_pr_thr)
                pr.threshold = pr_threshold;
            if (*o_pr_res)
                pr.resolution = pr_resolution;
            if (*o_pr_depth)
                pr.depth = pr_depth;
            if (*o_pr_delta)
                pr.delta = pr_delta;
            cmd_predict(pr, out);
        }
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kPreconditionError;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return kResourceError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kOk;
}

} // namespace ifsseq::cli
