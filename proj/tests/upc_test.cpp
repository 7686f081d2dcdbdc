#include <gtest/gtest.h>

#include <random>

#include "deblur/upc.hpp"

using namespace deblur;
using namespace deblur::upc;

namespace {

UpcDigits random_code(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> digit(0, 9);
    std::array<int, 12> d{};
    for (int& x : d) x = digit(rng);
    return UpcDigits(d);
}

BinaryBarVector bits_for(const UpcDigits& d, std::size_t p) {
    return threshold_signal(pattern_to_signal(encode_upc(d), p).values());
}

/// Bits for arbitrary widths, bypassing pattern validation.
BinaryBarVector bits_from_widths(const BarPattern& w, std::size_t p) {
    BinaryBarVector b;
    b.points_per_unit = p;
    for (std::size_t i = 0; i < w.size(); ++i)
        b.bits.insert(b.bits.end(), static_cast<std::size_t>(w[i]) * p, i % 2 == 0 ? 1 : 0);
    return b;
}

const UpcDigits kCoke = UpcDigits::parse("049000027679");

}  // namespace

TEST(Tables, EveryPatternSpansSevenUnits) {
    for (const auto* table : {&kPattern1, &kPattern2})
        for (const auto& w : *table) EXPECT_EQ(w[0] + w[1] + w[2] + w[3], 7);
}

// The twenty patterns are every composition of 7 into four parts, so any
// group that spans seven units matches some digit.
TEST(Tables, MirrorColumnIsReversedAndAllTwentyDistinct) {
    std::vector<WidthGroup> all;
    for (std::size_t d = 0; d < 10; ++d) {
        WidthGroup r = kPattern1[d];
        std::reverse(r.begin(), r.end());
        EXPECT_EQ(r, kPattern2[d]);
        all.push_back(kPattern1[d]);
        all.push_back(kPattern2[d]);
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
}

TEST(Digits, ParseAndValidate) {
    EXPECT_EQ(kCoke.str(), "049000027679");
    EXPECT_THROW(UpcDigits::parse("04900002767"), InvalidArgument);
    EXPECT_THROW(UpcDigits::parse("04900002767x"), InvalidArgument);
    EXPECT_THROW(UpcDigits(std::array<int, 12>{10}), InvalidArgument);
}

TEST(Encode, DigitZeroIsThreeTwoOneOne) {
    const BarPattern w = encode_upc(UpcDigits::parse("000000000000"));
    for (std::size_t g = 0; g < 12; ++g) {
        const auto s = group_start(g);
        EXPECT_EQ((WidthGroup{w[s], w[s + 1], w[s + 2], w[s + 3]}), (WidthGroup{3, 2, 1, 1}));
    }
}

TEST(Encode, CokeLeadingGroups) {
    const BarPattern w = encode_upc(kCoke);
    EXPECT_EQ((WidthGroup{w[3], w[4], w[5], w[6]}), (WidthGroup{3, 2, 1, 1}));
    EXPECT_EQ((WidthGroup{w[7], w[8], w[9], w[10]}), (WidthGroup{1, 1, 3, 2}));
    EXPECT_EQ((WidthGroup{w[11], w[12], w[13], w[14]}), (WidthGroup{3, 1, 1, 2}));
}

TEST(Encode, StructuralInvariantsOnRandomCodes) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const BarPattern w = encode_upc(random_code(rng));
        EXPECT_NO_THROW(validate(w));
        int total = 0;
        for (int x : w) total += x;
        EXPECT_EQ(total, 95);
    }
}

TEST(ValidatePattern, RejectsBrokenPatterns) {
    BarPattern w = encode_upc(kCoke);
    w[0] = 2;
    EXPECT_THROW(validate(w), InvalidArgument);
    w = encode_upc(kCoke);
    w[3] = 5;
    EXPECT_THROW(validate(w), InvalidArgument);
    w = encode_upc(kCoke);
    w[3] -= 1;
    w[4] += 1;
    EXPECT_NO_THROW(validate(w));
    w[7] += 1;
    w[11] -= 1;
    EXPECT_THROW(validate(w), InvalidArgument);
}

TEST(PatternToSignal, StartsWithGuardAtSixPointsPerUnit) {
    const Signal s = pattern_to_signal(encode_upc(kCoke), 6);
    ASSERT_EQ(s.size(), 570u);
    const std::vector<double> want{1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
    EXPECT_EQ(std::vector<double>(s.values().begin(), s.values().begin() + 18), want);
}

TEST(PatternToSignal, UnitResolutionIsBarMap) {
    const BarPattern w = encode_upc(kCoke);
    const Signal s = pattern_to_signal(w, 1);
    ASSERT_EQ(s.size(), 95u);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < 59; ++i)
        for (int k = 0; k < w[i]; ++k) EXPECT_EQ(s[pos++], i % 2 == 0 ? 1.0 : 0.0);
    EXPECT_THROW(pattern_to_signal(w, 0), InvalidArgument);
}

TEST(Threshold, BinaryInputIsUnchanged) {
    const Signal s = pattern_to_signal(encode_upc(kCoke), 2);
    const BinaryBarVector b = threshold_signal(s.values());
    EXPECT_EQ(b.points_per_unit, 2u);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(b.bits[i], s[i] == 1.0 ? 1 : 0);
}

TEST(Threshold, InvariantUnderPositiveAffineMaps) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> scale(0.01, 100.0), shift(-50.0, 50.0);
    for (int trial = 0; trial < 50; ++trial) {
        Vector f(190);
        for (double& x : f) x = normal(rng);
        const double a = scale(rng), c = shift(rng);
        Vector g(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) g[i] = a * f[i] + c;
        const auto bf = threshold_signal(f), bg = threshold_signal(g);
        // The threshold itself is rounded, so only samples away from it are compared.
        const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
        const double tau = 0.5 * (*lo + *hi);
        for (std::size_t i = 0; i < f.size(); ++i)
            if (std::abs(f[i] - tau) > 1e-9 * (*hi - *lo)) {
                EXPECT_EQ(bf.bits[i], bg.bits[i]);
            }
    }
}

TEST(Threshold, ExactAffineImageOfBinarySignal) {
    const Signal s = pattern_to_signal(encode_upc(kCoke), 6);
    Vector g(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) g[i] = 3.5 * s[i] - 1.25;
    EXPECT_EQ(threshold_signal(g), threshold_signal(s.values()));
}

TEST(Threshold, ErrorPaths) {
    EXPECT_THROW(threshold_signal(Vector(95, 0.3)), DegenerateThresholdError);
    EXPECT_THROW(threshold_signal(Vector(100, 0.3)), InvalidArgument);
    EXPECT_THROW(threshold_signal(Vector{}), InvalidArgument);
}

TEST(Checksum, Examples) {
    EXPECT_TRUE(check_digit_valid(kCoke));
    EXPECT_TRUE(check_digit_valid(UpcDigits::parse("000000000000")));
    EXPECT_FALSE(check_digit_valid(UpcDigits::parse("000000000001")));
}

TEST(Decode, CokeAtSixPointsPerUnit) {
    const DecodeResult r = decode_upc(bits_for(kCoke, 6));
    EXPECT_EQ(r.digits, kCoke);
    EXPECT_TRUE(r.checksum_valid);
    EXPECT_FALSE(r.reversed);
    EXPECT_EQ(r.merged_runs, 0u);
    ASSERT_EQ(r.groups.size(), 12u);
    EXPECT_EQ(r.groups[1].widths, (WidthGroup{1, 1, 3, 2}));
    EXPECT_EQ(r.groups[1].digit, 4);
    EXPECT_EQ(r.groups[1].column, 1);
    EXPECT_EQ(r.groups[1].run_lengths, (std::array<std::size_t, 4>{6, 6, 18, 12}));
    for (const auto& g : r.groups) {
        EXPECT_EQ(g.rounding_residual, 0.0);
        EXPECT_FALSE(g.repaired);
    }
}

TEST(Decode, RoundTripRandomCodesAllResolutions) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const UpcDigits d = random_code(rng);
        for (std::size_t p : {1u, 2u, 6u, 10u}) {
            const DecodeResult r = decode_upc(bits_for(d, p));
            EXPECT_EQ(r.digits, d) << d.str() << " p=" << p;
            EXPECT_EQ(r.checksum_valid, check_digit_valid(d));
        }
    }
}

TEST(Decode, ChecksumIsAdvisory) {
    const UpcDigits bad = UpcDigits::parse("049000027678");
    const DecodeResult r = decode_upc(bits_for(bad, 6));
    EXPECT_EQ(r.digits, bad);
    EXPECT_FALSE(r.checksum_valid);
}

TEST(Decode, SurvivesAnySingleBitFlip) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 5; ++trial) {
        const UpcDigits d = random_code(rng);
        const BinaryBarVector clean = bits_for(d, 6);
        for (std::size_t i = 0; i < clean.size(); ++i) {
            BinaryBarVector b = clean;
            b.bits[i] ^= 1;
            const DecodeResult r = decode_upc(b);
            ASSERT_EQ(r.digits, d) << "flip at " << i;
        }
    }
}

TEST(Decode, RepairsWidthSumOffByOne) {
    const UpcDigits d = UpcDigits::parse("123456789012");
    BinaryBarVector b = bits_for(d, 6);
    // Group 0 starts after the 3-unit start guard (18 samples) with a white bar.
    // Digit 1 is (2,2,2,1): white 12, black 12, white 12, black 6 samples.
    // Turning 3 white samples of the third bar black makes the runs 12,15,9,6:
    // raw widths 2, 2.5, 1.5, 1 round to 2,3,2,1 (sum 8) and must be repaired.
    for (std::size_t i = 18 + 24; i < 18 + 27; ++i) b.bits[i] = 1;
    const DecodeResult r = decode_upc(b);
    EXPECT_EQ(r.digits, d);
    EXPECT_TRUE(r.groups[0].repaired);
    EXPECT_EQ(r.groups[0].widths, (WidthGroup{2, 2, 2, 1}));
}

TEST(Decode, StructuralFailuresReportDiagnostics) {
    // Wrong run count: blank out the middle guard.
    BinaryBarVector b = bits_for(kCoke, 6);
    for (std::size_t i = 45 * 6; i < 50 * 6; ++i) b.bits[i] = 0;
    EXPECT_THROW(decode_upc(b), DecodeError);

    // Too wide: all-black start makes a run longer than four units.
    BinaryBarVector w = bits_for(kCoke, 6);
    for (std::size_t i = 0; i < 40; ++i) w.bits[i] = 1;
    EXPECT_THROW(decode_upc(w), DecodeError);

    // Group 1 spans nine units and group 2 five; neither is repairable.
    BarPattern widths = encode_upc(kCoke);
    widths[3] = 4;
    widths[4] = 3;
    widths[9] = 2;
    widths[10] = 1;
    try {
        decode_upc(bits_from_widths(widths, 6));
        FAIL() << "expected DecodeError";
    } catch (const DecodeError& e) {
        ASSERT_TRUE(e.group().has_value());
        EXPECT_EQ(*e.group(), 0u);
    }

    EXPECT_THROW(decode_upc(BinaryBarVector{std::vector<std::uint8_t>(100, 0), 1}), InvalidArgument);
    EXPECT_THROW(decode_upc(BinaryBarVector{std::vector<std::uint8_t>(95, 0), 0}), InvalidArgument);
}

TEST(Decode, GuardWidthEnforced) {
    // Start guard's white bar doubled, paid for by the first digit bar.
    BarPattern widths = encode_upc(kCoke);
    widths[1] = 2;
    widths[3] = 2;
    try {
        decode_upc(bits_from_widths(widths, 6));
        FAIL() << "expected DecodeError";
    } catch (const DecodeError& e) {
        EXPECT_NE(std::string(e.what()).find("guard"), std::string::npos) << e.what();
    }
}

TEST(Decode, ReversedScanRejectedByDefaultAcceptedOnRequest) {
    const BinaryBarVector fwd = bits_for(kCoke, 6);
    BinaryBarVector rev = fwd;
    std::reverse(rev.bits.begin(), rev.bits.end());
    EXPECT_THROW(decode_upc(rev), DecodeError);
    const DecodeResult r = decode_upc(rev, {.allow_reversed = true});
    EXPECT_TRUE(r.reversed);
    EXPECT_EQ(r.digits, kCoke);
    EXPECT_TRUE(r.checksum_valid);
    // Forward scans are unaffected by the option.
    const DecodeResult f = decode_upc(fwd, {.allow_reversed = true});
    EXPECT_FALSE(f.reversed);
    EXPECT_EQ(f.digits, kCoke);
}

TEST(MergeShortRuns, ShortestFirstAndEdges) {
    std::vector<detail::Run> runs{{1, 6}, {0, 1}, {1, 6}, {0, 6}};
    EXPECT_EQ(detail::merge_short_runs(runs, 6), 1u);
    ASSERT_EQ(runs.size(), 2u);
    EXPECT_EQ(runs[0].length, 13u);
    EXPECT_EQ(runs[0].colour, 1);

    std::vector<detail::Run> edge{{1, 2}, {0, 6}, {1, 6}};
    EXPECT_EQ(detail::merge_short_runs(edge, 6), 1u);
    ASSERT_EQ(edge.size(), 2u);
    EXPECT_EQ(edge[0].colour, 0);
    EXPECT_EQ(edge[0].length, 8u);

    // Exactly half a unit is kept.
    std::vector<detail::Run> half{{1, 6}, {0, 3}, {1, 6}};
    EXPECT_EQ(detail::merge_short_runs(half, 6), 0u);
}
