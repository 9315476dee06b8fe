#include <gtest/gtest.h>

#include <cmath>

#include "ifsseq/error.hpp"
#include "ifsseq/sequences.hpp"
#include "support/oracles.hpp"

using namespace ifsseq;

namespace {

Ifs cantor_term(int j)
{
    return Ifs(Box::unit(1), {AffineMap::line(1.0 / 3, 1.0 / (3.0 * j)), AffineMap::line(1.0 / 3, 2.0 / 3)});
}

const Ifs kCantor(Box::unit(1), {AffineMap::line(1.0 / 3, 0.0), AffineMap::line(1.0 / 3, 2.0 / 3)});

IfsSequence cantor_sequence(int count)
{
    std::vector<Ifs> terms;
    for (int j = 1; j <= count; ++j)
        terms.push_back(cantor_term(j));
    return IfsSequence(std::move(terms));
}

// Closed form for D(S_j, S_k): only the first slot differs, by |1/(3j) - 1/(3k)|.
double cantor_gap(int j, int k)
{
    const double s = std::abs(1.0 / (3.0 * j) - 1.0 / (3.0 * k));
    return s / (1 + s);
}

// Smallest zero-based N with every pairwise tail gap below eps, by scanning.
std::optional<std::size_t> scan_cauchy(int count, double eps)
{
    for (int n = 0; n < count - 1; ++n) {
        bool ok = true;
        for (int j = n; j < count && ok; ++j)
            for (int k = j + 1; k < count && ok; ++k)
                ok = cantor_gap(j + 1, k + 1) < eps;
        if (ok)
            return static_cast<std::size_t>(n);
    }
    return std::nullopt;
}

Vector v2(double x, double y)
{
    Vector v(2);
    v << x, y;
    return v;
}

Ifs constants(std::initializer_list<std::pair<double, double>> pts)
{
    std::vector<AffineMap> out;
    for (auto [x, y] : pts)
        out.push_back(AffineMap::constant(v2(x, y)));
    return Ifs(Box(v2(-1, -1), v2(1, 1)), std::move(out));
}

} // namespace

TEST(IfsSequence, RejectsEmptyAndMixedArity)
{
    EXPECT_THROW(IfsSequence({}), InputError);
    const Ifs one(Box::unit(1), {AffineMap::line(0.5, 0.0)});
    EXPECT_THROW(IfsSequence({kCantor, one}), ArityMismatch);
}

TEST(AlignChain, ReordersSwappedTermsAndIsIdempotent)
{
    const Ifs swapped = cantor_term(2).reindexed(Permutation({1, 0}));
    const IfsSequence seq({cantor_term(1), swapped, cantor_term(3)});
    const IfsSequence a = align_chain(seq);
    EXPECT_TRUE(a.aligned());
    EXPECT_EQ(a.alignment()[1], Permutation({1, 0}));
    EXPECT_EQ(a[1], cantor_term(2));
    const IfsSequence b = align_chain(a);
    for (std::size_t j = 0; j < a.size(); ++j)
        EXPECT_EQ(a[j], b[j]);
}

TEST(Monotonicity, DecreasingAndEventuallyDecreasing)
{
    auto term = [](double a) { return Ifs(Box::unit(1), {AffineMap::line(a, 0.0), AffineMap::line(0.2, 0.5)}); };
    EXPECT_TRUE(is_decreasing(IfsSequence({term(0.5), term(0.4), term(0.3)})));
    const IfsSequence late({term(0.2), term(0.5), term(0.4), term(0.3)});
    EXPECT_FALSE(is_decreasing(late));
    EXPECT_EQ(eventually_decreasing_at(late), 1u);
    EXPECT_EQ(eventually_decreasing_at(IfsSequence({term(0.3), term(0.4), term(0.5)})), std::nullopt);
    EXPECT_EQ(eventually_decreasing_at(IfsSequence({term(0.3)})), 0u);
}

TEST(CauchyIndex, CantorSequenceMatchesScanOracle)
{
    // All pairwise gaps of terms 2..5 stay below 0.1.
    EXPECT_EQ(cauchy_index(cantor_sequence(5), 0.1), 1u);
    for (int count : {2, 5, 10, 20})
        for (double eps : {0.2, 0.1, 0.05, 0.01})
            EXPECT_EQ(cauchy_index(cantor_sequence(count), eps), scan_cauchy(count, eps)) << count << " " << eps;
}

TEST(CauchyIndex, ConstantSequenceAndBadEps)
{
    const IfsSequence c({kCantor, kCantor, kCantor});
    EXPECT_EQ(cauchy_index(c, 1e-9), 0u);
    EXPECT_EQ(cauchy_index(IfsSequence({kCantor}), 0.1), 0u);
    EXPECT_THROW(cauchy_index(c, 0.0), InputError);
    EXPECT_THROW(cauchy_index(c, -1.0), InputError);
}

TEST(CauchyIndex, AbsentWhenTermsOscillate)
{
    const Ifs far(Box::unit(1), {AffineMap::line(0.1, 0.9), AffineMap::line(0.1, 0.9)});
    const IfsSequence s({kCantor, far, kCantor, far});
    EXPECT_EQ(cauchy_index(s, 0.1), std::nullopt);
}

TEST(ConvergesTo, CantorSequenceClosedForm)
{
    const IfsSequence seq = cantor_sequence(20);
    for (int j = 1; j <= 20; ++j)
        EXPECT_NEAR(big_d(seq[static_cast<std::size_t>(j - 1)], kCantor), 1.0 / (3 * j + 1), 1e-12);
    // 1/(3j+1) < 0.05 iff j >= 7, i.e. zero-based index 6.
    EXPECT_EQ(converges_to(seq, kCantor, 0.05), 6u);
    const Ifs far(Box::unit(1), {AffineMap::line(0.1, 0.9), AffineMap::line(0.1, 0.0)});
    EXPECT_GE(big_d(seq.back(), far), 0.2);
    EXPECT_EQ(converges_to(seq, far, 0.1), std::nullopt);
}

TEST(LimitOfContractions, IncreasingFactorsAreRejected)
{
    std::vector<AffineMap> maps;
    for (int n = 1; n <= 100; ++n)
        maps.push_back(AffineMap::line(1.0 - 1.0 / n, 0.0));
    try {
        limit_of_contractions(maps, Box::unit(1), 0.05);
        FAIL() << "expected PreconditionError";
    } catch (const PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("not eventually decreasing"), std::string::npos);
    }
}

TEST(LimitOfContractions, DecreasingCauchyTail)
{
    std::vector<AffineMap> maps;
    for (int n = 1; n <= 30; ++n)
        maps.push_back(AffineMap::line(0.5 + 1.0 / (4 * n), 0.0));
    const ContractionLimit c = limit_of_contractions(maps, Box::unit(1), 0.01);
    EXPECT_EQ(c.map, maps.back());
    EXPECT_DOUBLE_EQ(c.factor_bound, maps.back().lipschitz());
    for (std::size_t j = c.tail_start; j < maps.size(); ++j)
        for (std::size_t k = j; k < maps.size(); ++k)
            EXPECT_LT(dbar_inf(maps[j], maps[k], Box::unit(1)), 0.01);
    EXPECT_GE(dbar_inf(maps[c.tail_start - 1], maps.back(), Box::unit(1)), 0.01);
}

TEST(LimitOfContractions, NonCauchyIsRejected)
{
    std::vector<AffineMap> maps{AffineMap::line(0.5, 0.0), AffineMap::line(0.5, 0.5), AffineMap::line(0.5, 0.0)};
    EXPECT_THROW(limit_of_contractions(maps, Box::unit(1), 0.1), PreconditionError);
}

TEST(LimitCandidate, CantorSequence)
{
    const int count = 10;
    const SequenceReport r = limit_candidate(cantor_sequence(count), 0.05);
    ASSERT_TRUE(r.limit.has_value());
    EXPECT_EQ(*r.limit, cantor_term(count));
    EXPECT_NEAR(big_d(*r.limit, kCantor), 1.0 / (3 * count + 1), 1e-12);
    EXPECT_TRUE(r.decreasing);
    EXPECT_TRUE(r.transitive);
    EXPECT_EQ(r.cauchy_at, 3u);
    ASSERT_TRUE(r.tail_start.has_value());
    double worst = 0.0;
    for (std::size_t j = *r.tail_start; j < r.aligned.size(); ++j)
        worst = std::max(worst, big_d(r.aligned[j], *r.limit));
    EXPECT_EQ(r.residual, worst);
    EXPECT_LT(r.residual, 0.05);
    ASSERT_EQ(r.consecutive_distances.size(), static_cast<std::size_t>(count - 1));
    for (int j = 1; j < count; ++j)
        EXPECT_NEAR(r.consecutive_distances[static_cast<std::size_t>(j - 1)], cantor_gap(j, j + 1), 1e-12);
}

TEST(LimitCandidate, SingleTermIsTrivial)
{
    const SequenceReport r = analyze_sequence(IfsSequence({kCantor}), 0.1);
    ASSERT_TRUE(r.limit.has_value());
    EXPECT_EQ(*r.limit, kCantor);
    EXPECT_EQ(r.residual, 0.0);
    EXPECT_TRUE(r.consecutive_distances.empty());
    EXPECT_EQ(r.cauchy_at, 0u);
}

TEST(LimitCandidate, PreconditionCarriesSlot)
{
    std::vector<Ifs> terms;
    for (int n = 2; n <= 6; ++n)
        terms.push_back(Ifs(Box::unit(1), {AffineMap::line(0.1, 0.0), AffineMap::line(1.0 - 1.0 / n, 0.0)}));
    try {
        limit_candidate(IfsSequence(terms), 0.5);
        FAIL() << "expected PreconditionError";
    } catch (const PreconditionError& e) {
        EXPECT_EQ(e.slot(), 1u);
    }
    const SequenceReport r = analyze_sequence(IfsSequence(terms), 0.5);
    EXPECT_FALSE(r.limit.has_value());
    EXPECT_FALSE(r.notes.empty());
}

TEST(Analyze, PlanarTripleReportsTransitivityFailure)
{
    const IfsSequence seq({constants({{0, 1}, {1, -1}}), constants({{0, 0}, {1, 0}}), constants({{0, -1}, {1, 1}})});
    const SequenceReport r = analyze_sequence(seq, 0.1);
    EXPECT_FALSE(r.transitive);
    bool noted = false;
    for (const auto& n : r.notes)
        noted = noted || n.find("not transitive") != std::string::npos;
    EXPECT_TRUE(noted);
    // Constant maps all have factor 0, so the factors never increase.
    EXPECT_TRUE(r.decreasing);
}

TEST(SequenceProperty, ReportDoesNotDependOnTermLabelling)
{
    auto g = oracle::rng(51);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Ifs> terms, shuffled;
        const Ifs base = oracle::random_ifs(g, 1, 3, 0.5);
        for (int j = 1; j <= 6; ++j) {
            std::vector<AffineMap> maps;
            for (const AffineMap& f : base.maps())
                maps.push_back(AffineMap::line(f.linear()(0, 0) * (1 - 0.5 / (j + 1)), f.offset()[0] * (1 - 0.1 / j)));
            terms.emplace_back(Box::unit(1), maps);
            shuffled.push_back(terms.back().reindexed(Permutation({2, 0, 1})));
        }
        const SequenceReport a = analyze_sequence(IfsSequence(terms), 0.05);
        const SequenceReport b = analyze_sequence(IfsSequence(shuffled), 0.05);
        EXPECT_EQ(a.cauchy_at, b.cauchy_at);
        ASSERT_EQ(a.consecutive_distances.size(), b.consecutive_distances.size());
        for (std::size_t j = 0; j < a.consecutive_distances.size(); ++j)
            EXPECT_NEAR(a.consecutive_distances[j], b.consecutive_distances[j], 1e-12);
        EXPECT_EQ(a.limit.has_value(), b.limit.has_value());
        if (a.limit && b.limit)
            EXPECT_NEAR(big_d(*a.limit, *b.limit), 0.0, 1e-12);
    }
}
