#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifsseq/attractor.hpp"
#include "ifsseq/sequences.hpp"

namespace ifsseq {

/// h(L, W(L)): how far the target is from its own Hutchinson image.
double collage_distance(const Ifs& s, const PointSet& target);

/// eps / (1 - t), the bound on h(L, attractor) given collage distance eps and
/// contractivity t. Throws InputError unless 0 <= t < 1 and eps >= 0.
double collage_bound(double eps, double t);

/// Random-restart coordinate descent settings for `fit_ifs`.
struct FitConfig {
    std::size_t n = 2;            ///< maps per IFS
    std::size_t restarts = 8;
    std::size_t max_iters = 200;  ///< sweeps over all coefficients per restart
    double initial_step = 0.1;    ///< as a fraction of the domain diameter
    double decay = 0.7;           ///< step multiplier after a sweep without improvement
    double min_step = 1e-5;       ///< stop once the step fraction falls below this
    double s_max = 0.95;          ///< contractivity cap, 0 < s_max < 1
    std::uint64_t seed = 1;

    /// Throws InputError on out-of-range values.
    void validate() const;
};

/// Moves a map onto the feasible set: singular values clamped to `s_max`,
/// rows shrunk until the image of `domain` fits its extent, and the offset
/// shifted so that the image lies inside `domain`.
AffineMap project_to_domain(const AffineMap& f, const Box& domain, double s_max);

struct FitResult {
    Ifs ifs;
    double collage_distance;
    bool baseline = false;          ///< no candidate beat the all-constant baseline
    std::size_t restart = 0;        ///< index of the winning restart
    std::vector<double> trace;      ///< accepted objective values of the winning restart
};

/// Fits `cfg.n` affine maps on `domain` to `target` by minimizing the collage
/// distance. Restart 0 starts from `warm_start` when given, else from a
/// deterministic clustering of the target; later restarts use randomly seeded
/// clusterings with jittered coefficients. The lowest objective wins, ties
/// going to the lowest restart index. Deterministic for a given config.
FitResult fit_ifs(const PointSet& target, const Box& domain, const FitConfig& cfg,
                  const std::optional<Ifs>& warm_start = std::nullopt);

struct FittedSequence {
    IfsSequence sequence;                 ///< chain-aligned fits
    std::vector<double> collage_distances;
    std::vector<char> baseline;           ///< per frame: the baseline was returned
};

/// Fits every frame, warm-starting each fit from the previous frame's
/// result, then chain-aligns the fits. Errors carry the frame index.
FittedSequence fit_sequence(std::span<const PointSet> targets, const Box& domain, const FitConfig& cfg);

enum class ExtrapolationKind { HoldLast, Linear, Geometric };

struct ExtrapolationModel {
    ExtrapolationKind kind = ExtrapolationKind::Geometric;
    std::size_t horizon = 1;
};

struct Extrapolation {
    Ifs ifs;
    std::vector<std::string> warnings;
};

/// Predicts the term `horizon` steps past the end of the chain-aligned
/// sequence, coefficient by coefficient:
///  - HoldLast repeats the final term;
///  - Linear continues the final value along the least-squares slope;
///  - Geometric fits c + beta * rho^j through the last three values and falls
///    back to Linear (with a warning) when |rho| >= 1.
/// Maps are projected back to contractivity <= s_max inside the domain.
/// Horizon 0 returns the final term unchanged.
Extrapolation extrapolate(const IfsSequence& seq, const ExtrapolationModel& model, double s_max = 0.95);

} // namespace ifsseq
