#include <gtest/gtest.h>

#include <cmath>

#include "ifsseq/error.hpp"
#include "ifsseq/linalg.hpp"
#include "ifsseq/metric_core.hpp"
#include "support/oracles.hpp"

using namespace ifsseq;

namespace {

Box unit1() { return Box::unit(1); }

Vector vec(std::initializer_list<double> xs)
{
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        v[i++] = x;
    return v;
}

Matrix mat2(double a, double b, double c, double d)
{
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

} // namespace

TEST(Box, RejectsInvertedOrMismatchedBounds)
{
    EXPECT_THROW(Box(vec({1.0}), vec({0.0})), InputError);
    EXPECT_THROW(Box(vec({0.0, 0.0}), vec({1.0})), InputError);
    EXPECT_THROW(Box(Vector(0), Vector(0)), InputError);
    EXPECT_NO_THROW(Box(vec({0.5}), vec({0.5})));
}

TEST(Box, VerticesEnumerateCorners)
{
    const Box b(vec({0.0, -1.0}), vec({2.0, 1.0}));
    const auto v = b.vertices();
    ASSERT_EQ(v.size(), 4u);
    EXPECT_EQ(v[0], vec({0.0, -1.0}));
    EXPECT_EQ(v[1], vec({2.0, -1.0}));
    EXPECT_EQ(v[2], vec({0.0, 1.0}));
    EXPECT_EQ(v[3], vec({2.0, 1.0}));
    EXPECT_DOUBLE_EQ(b.diameter(), std::sqrt(8.0));
}

TEST(AffineMap, ContractionFactoryEnforcesLipschitzBelowOne)
{
    EXPECT_THROW(AffineMap::contraction(Matrix::Identity(1, 1), vec({0.0})), InvalidContraction);
    EXPECT_THROW(AffineMap::contraction(mat2(0.6, 0.6, 0.6, 0.6), vec({0.0, 0.0})), InvalidContraction);
    EXPECT_NO_THROW(AffineMap::contraction(mat2(0.5, 0.0, 0.0, 0.5), vec({0.0, 0.0})));
    EXPECT_FALSE(AffineMap::identity(3).is_contraction());
}

TEST(AffineMap, RejectsShapeMismatchAndNonFinite)
{
    EXPECT_THROW(AffineMap(Matrix::Zero(2, 2), vec({0.0})), InputError);
    EXPECT_THROW(AffineMap(Matrix::Zero(2, 3), vec({0.0, 0.0})), InputError);
    EXPECT_THROW(AffineMap::line(NAN, 0.0), InputError);
    EXPECT_THROW(AffineMap::line(0.5, INFINITY), InputError);
}

TEST(AffineMap, EvaluationAndComposition)
{
    const AffineMap f(mat2(0.5, 0.0, 0.25, 0.5), vec({0.1, 0.2}));
    const AffineMap g = AffineMap::line(2.0, 1.0);
    EXPECT_DOUBLE_EQ(g(vec({3.0}))[0], 7.0);
    const Vector x = vec({0.4, 0.8});
    EXPECT_TRUE(f(x).isApprox(vec({0.3, 0.7})));
    const AffineMap ff = f.after(f);
    EXPECT_TRUE(ff(x).isApprox(f(f(x))));
    EXPECT_THROW(f(vec({1.0})), InputError);
    EXPECT_TRUE(AffineMap::constant(vec({0.3, 0.4}))(x).isApprox(vec({0.3, 0.4})));
}

TEST(AffineMap, MapsInto)
{
    EXPECT_TRUE(AffineMap::line(1.0 / 3.0, 2.0 / 3.0).maps_into(unit1()));
    EXPECT_FALSE(AffineMap::line(0.5, 0.6).maps_into(unit1()));
    EXPECT_TRUE(AffineMap::line(-0.5, 1.0).maps_into(unit1()));
}

TEST(Contractivity, MatchesCharacteristicPolynomialIn2d)
{
    auto g = oracle::rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const double a = oracle::uniform(g, -2, 2), b = oracle::uniform(g, -2, 2);
        const double c = oracle::uniform(g, -2, 2), d = oracle::uniform(g, -2, 2);
        const double expected = oracle::spectral_norm_2x2(a, b, c, d);
        EXPECT_NEAR(spectral_norm(mat2(a, b, c, d)), expected, 1e-12 * std::max(1.0, expected));
    }
}

TEST(Contractivity, MatchesPowerIterationIn3dAnd4d)
{
    auto g = oracle::rng(12);
    for (std::size_t d : {3u, 4u}) {
        for (int trial = 0; trial < 50; ++trial) {
            Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            std::vector<double> flat;
            for (Eigen::Index r = 0; r < m.rows(); ++r)
                for (Eigen::Index c = 0; c < m.cols(); ++c) {
                    m(r, c) = oracle::uniform(g, -1, 1);
                    flat.push_back(m(r, c));
                }
            EXPECT_NEAR(spectral_norm(m), oracle::spectral_norm_power(flat, d), 1e-9);
        }
    }
}

TEST(Contractivity, ClampSingularValues)
{
    const Matrix m = mat2(2.0, 0.0, 0.0, 0.3);
    const Matrix c = clamp_singular_values(m, 0.9);
    EXPECT_NEAR(spectral_norm(c), 0.9, 1e-12);
    EXPECT_NEAR(c(1, 1), 0.3, 1e-12);
    EXPECT_TRUE(clamp_singular_values(mat2(0.1, 0.2, 0.0, 0.3), 0.9).isApprox(mat2(0.1, 0.2, 0.0, 0.3)));
}

// Worked example on [0,1]: S = {x/2, 1/2 + x/2}, T = {x/3, 2/3 + x/3}, U = {1/2 + x/2, 3x/4}.
TEST(DbarInf, WorkedExamplePairwiseValues)
{
    const AffineMap s1 = AffineMap::line(0.5, 0.0), s2 = AffineMap::line(0.5, 0.5);
    const AffineMap t1 = AffineMap::line(1.0 / 3, 0.0), t2 = AffineMap::line(1.0 / 3, 2.0 / 3);
    const AffineMap u1 = AffineMap::line(0.5, 0.5), u2 = AffineMap::line(0.75, 0.0);
    const Box b = unit1();
    EXPECT_NEAR(dbar_inf(s1, t1, b), 1.0 / 7, 1e-12);
    EXPECT_NEAR(dbar_inf(s2, t2, b), 1.0 / 7, 1e-12);
    EXPECT_NEAR(dbar_inf(s1, t2, b), 2.0 / 5, 1e-12);
    EXPECT_NEAR(dbar_inf(s2, t1, b), 2.0 / 5, 1e-12);
    EXPECT_NEAR(dbar_inf(s1, u1, b), 1.0 / 3, 1e-12);
    EXPECT_NEAR(dbar_inf(s2, u2, b), 1.0 / 3, 1e-12);
    EXPECT_NEAR(dbar_inf(s1, u2, b), 1.0 / 5, 1e-12);
    EXPECT_EQ(dbar_inf(s2, u1, b), 0.0);
}

TEST(DbarInf, IdentityWitnessIsOneOverNPlusOne)
{
    for (int n = 1; n <= 100; ++n) {
        const AffineMap f = AffineMap::line(1.0 - 1.0 / n, 0.0);
        EXPECT_NEAR(dbar_inf(f, AffineMap::identity(1), unit1()), 1.0 / (n + 1), 1e-12) << n;
    }
}

TEST(DbarInf, DimensionMismatchThrows)
{
    EXPECT_THROW(sup_distance(AffineMap::identity(1), AffineMap::identity(2), unit1()), InputError);
    EXPECT_THROW(sup_distance(AffineMap::identity(2), AffineMap::identity(2), unit1()), InputError);
}

TEST(DbarInf, RefusesHugeVertexEnumeration)
{
    const std::size_t d = kMaxVertexDim + 1;
    EXPECT_THROW(sup_distance(AffineMap::identity(d), AffineMap::identity(d), Box::unit(d)), ResourceError);
}

TEST(DbarInfProperty, RangeIdentitySymmetryTriangle)
{
    auto g = oracle::rng(21);
    for (std::size_t d : {1u, 2u}) {
        const Box box = Box::unit(d);
        for (int trial = 0; trial < 500; ++trial) {
            const AffineMap f = oracle::random_affine(g, d);
            const AffineMap h = oracle::random_affine(g, d);
            const AffineMap k = oracle::random_affine(g, d);
            const double fh = dbar_inf(f, h, box), hk = dbar_inf(h, k, box), fk = dbar_inf(f, k, box);
            EXPECT_GE(fh, 0.0);
            EXPECT_LT(fh, 1.0);
            EXPECT_EQ(dbar_inf(f, f, box), 0.0);
            EXPECT_EQ(fh, dbar_inf(h, f, box));
            EXPECT_LE(fk, fh + hk + 1e-12);
        }
    }
}

TEST(DbarInfProperty, VertexExactAgreesWithSampling)
{
    auto g = oracle::rng(22);
    for (std::size_t d : {1u, 2u}) {
        const Box box = Box::unit(d);
        const std::size_t per_axis = d == 1 ? 10001 : 201;
        const double grid = 1.0 / static_cast<double>(per_axis - 1);
        for (int trial = 0; trial < 100; ++trial) {
            const AffineMap f = oracle::random_affine(g, d);
            const AffineMap h = oracle::random_affine(g, d);
            const double exact = sup_distance(f, h, box);
            const double sampled = sup_distance_sampled(f, h, box, per_axis);
            const double lip = spectral_norm(f.linear() - h.linear());
            EXPECT_LE(sampled, exact + 1e-12);
            EXPECT_LE(exact - sampled, lip * grid * std::sqrt(static_cast<double>(d)) + 1e-12);
        }
    }
}

TEST(DbarInfProperty, SupDistanceMatchesIndependentSamplingOracle)
{
    // Dense sampling written out here, independent of the library sampler.
    auto g = oracle::rng(23);
    const Box box = Box::unit(2);
    for (int trial = 0; trial < 30; ++trial) {
        const AffineMap f = oracle::random_affine(g, 2);
        const AffineMap h = oracle::random_affine(g, 2);
        double best = 0.0;
        const int n = 400;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const Vector x = vec({double(i) / n, double(j) / n});
                best = std::max(best, (f(x) - h(x)).norm());
            }
        const double lip = spectral_norm(f.linear() - h.linear());
        const double exact = sup_distance(f, h, box);
        EXPECT_GE(exact + 1e-12, best);
        EXPECT_LE(exact, best + lip * std::sqrt(2.0) / n + 1e-12);
    }
}

TEST(DbarInfProperty, ConstantMapsGiveBoundedEuclideanDistance)
{
    auto g = oracle::rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector p = vec({oracle::uniform(g, -3, 3), oracle::uniform(g, -3, 3)});
        const Vector q = vec({oracle::uniform(g, -3, 3), oracle::uniform(g, -3, 3)});
        const double s = (p - q).norm();
        EXPECT_NEAR(dbar_inf(AffineMap::constant(p), AffineMap::constant(q), Box::unit(2)), s / (1 + s), 1e-15);
    }
}

TEST(ApproxEqual, ComparesCoefficients)
{
    EXPECT_TRUE(approx_equal(AffineMap::line(0.5, 0.1), AffineMap::line(0.5 + 1e-14, 0.1)));
    EXPECT_FALSE(approx_equal(AffineMap::line(0.5, 0.1), AffineMap::line(0.5, 0.1 + 1e-9)));
    EXPECT_FALSE(approx_equal(AffineMap::identity(1), AffineMap::identity(2)));
}
