#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "deblur/noise.hpp"

using namespace deblur;

TEST(VectorNorm, Examples) {
    EXPECT_EQ(vector_norm(Vector{3, 4}), 5.0);
    EXPECT_EQ(vector_norm(Vector(7, 0.0)), 0.0);
    EXPECT_EQ(vector_norm(Vector{1, 1, 1, 1}), 2.0);
}

TEST(AddNoise, ZeroEpsilonIsExactCopy) {
    const Vector b{1.5, -2.25, 1e-300, 0.0};
    EXPECT_EQ(add_noise(std::span<const double>(b), {0.0, 99}), b);
}

TEST(AddNoise, SameSeedSameOutput) {
    const Signal b = test_signal(make_grid(64));
    const Signal x = add_noise(b, {1e-3, 42});
    const Signal y = add_noise(b, {1e-3, 42});
    EXPECT_EQ(x.values(), y.values());
    EXPECT_EQ(x.grid().points, b.grid().points);
}

TEST(AddNoise, DifferentSeedsDiffer) {
    const Vector b(50, 1.0);
    EXPECT_NE(add_noise(std::span<const double>(b), {1e-2, 1}), add_noise(std::span<const double>(b), {1e-2, 2}));
}

TEST(AddNoise, NegativeOrNonFiniteEpsilonRejected) {
    const Vector b(5, 1.0);
    EXPECT_THROW(add_noise(std::span<const double>(b), {-1e-3, 0}), InvalidArgument);
    EXPECT_THROW(noise_vector(b, {std::nan(""), 0}), InvalidArgument);
}

TEST(NoiseVector, SampleStandardDeviationNearTarget) {
    const std::size_t n = 10000;
    Vector b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = std::sin(0.01 * static_cast<double>(i));
    const double eps = 1e-3;
    const Vector e = noise_vector(b, {eps, 7});
    const double target = eps * vector_norm(b);
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : e) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1));
    EXPECT_NEAR(sd / target, 1.0, 0.05);
    EXPECT_LT(std::abs(mean), 4.0 * target / std::sqrt(static_cast<double>(n)));
}

TEST(NoiseVector, ScalesLinearlyInEpsilon) {
    const Vector b(101, 0.5);
    const Vector e1 = noise_vector(b, {1e-4, 3});
    const Vector e2 = noise_vector(b, {4e-4, 3});
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(e2[i], 4.0 * e1[i]);
}

TEST(StandardNormals, OddLengthIsPrefixOfEvenLength) {
    const Vector a = standard_normals(9, 5);
    const Vector b = standard_normals(10, 5);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(StandardNormals, AllFinite) {
    for (double z : standard_normals(100000, 0)) ASSERT_TRUE(std::isfinite(z));
}

// Pins the stream so a platform or library change is caught.
TEST(StandardNormals, PinnedValuesForSeedZero) {
    const Vector z = standard_normals(4, 0);
    std::mt19937_64 eng(0);
    auto u = [&] { return (static_cast<double>(eng() >> 11) + 1.0) / 9007199254740992.0; };
    const double u1 = u(), u2 = u();
    const double r = std::sqrt(-2.0 * std::log(u1));
    EXPECT_EQ(z[0], r * std::cos(2.0 * 3.141592653589793 * u2));
    EXPECT_EQ(z[1], r * std::sin(2.0 * 3.141592653589793 * u2));
}
