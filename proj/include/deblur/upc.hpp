#pragma once

// UPC-A codec: 12 digits <-> 59 bar widths (95 units) <-> sampled 0/1 signal.
//
// Layout, left to right, black first:
//   start guard  b w b          widths 1 1 1
//   digits 1-6   w b w b        four widths summing to 7
//   middle guard w b w b w      widths 1 1 1 1 1
//   digits 7-12  b w b w        same width patterns as the left half
//   end guard    b w b          widths 1 1 1

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deblur/blur.hpp"
#include "deblur/errors.hpp"
#include "deblur/kernels.hpp"

namespace deblur::upc {

inline constexpr std::size_t kDigitCount = 12;
inline constexpr std::size_t kBarCount = 59;
inline constexpr std::size_t kUnitCount = 95;
inline constexpr int kGroupWidth = 7;

using WidthGroup = std::array<int, 4>;

/// Width patterns per digit. Column 2 is column 1 read backwards.
inline constexpr std::array<WidthGroup, 10> kPattern1 = {{
    {3, 2, 1, 1},
    {2, 2, 2, 1},
    {2, 1, 2, 2},
    {1, 4, 1, 1},
    {1, 1, 3, 2},
    {1, 2, 3, 1},
    {1, 1, 1, 4},
    {1, 3, 1, 2},
    {1, 2, 1, 3},
    {3, 1, 1, 2},
}};

inline constexpr std::array<WidthGroup, 10> kPattern2 = {{
    {1, 1, 2, 3},
    {1, 2, 2, 2},
    {2, 2, 1, 2},
    {1, 1, 4, 1},
    {2, 3, 1, 1},
    {1, 3, 2, 1},
    {4, 1, 1, 1},
    {2, 1, 3, 1},
    {3, 1, 2, 1},
    {2, 1, 1, 3},
}};

/// Exactly twelve decimal digits.
class UpcDigits {
public:
    UpcDigits() = default;

    explicit UpcDigits(const std::array<int, kDigitCount>& digits) : digits_(digits) {
        for (int d : digits_)
            if (d < 0 || d > 9) throw InvalidArgument("UPC digit out of range 0..9: " + std::to_string(d));
    }

    static UpcDigits parse(std::string_view text) {
        if (text.size() != kDigitCount) {
            throw InvalidArgument("a UPC-A code has 12 digits, got '" + std::string(text) + "'");
        }
        std::array<int, kDigitCount> d{};
        for (std::size_t i = 0; i < kDigitCount; ++i) {
            if (text[i] < '0' || text[i] > '9') {
                throw InvalidArgument("non-digit character in UPC '" + std::string(text) + "'");
            }
            d[i] = text[i] - '0';
        }
        return UpcDigits(d);
    }

    int operator[](std::size_t i) const noexcept { return digits_[i]; }
    const std::array<int, kDigitCount>& digits() const noexcept { return digits_; }

    std::string str() const {
        std::string s(kDigitCount, '0');
        for (std::size_t i = 0; i < kDigitCount; ++i) s[i] = static_cast<char>('0' + digits_[i]);
        return s;
    }

    friend bool operator==(const UpcDigits&, const UpcDigits&) = default;

private:
    std::array<int, kDigitCount> digits_{};
};

/// 59 bar widths in units; bars alternate colour starting with black.
using BarPattern = std::array<int, kBarCount>;

/// Zero-based bar indices of the guard bars.
inline constexpr bool is_guard_bar(std::size_t bar) {
    return bar < 3 || (bar >= 27 && bar < 32) || bar >= 56;
}

/// First bar index of digit group g (0..11).
inline constexpr std::size_t group_start(std::size_t g) { return g < 6 ? 3 + 4 * g : 32 + 4 * (g - 6); }

inline BarPattern encode_upc(const UpcDigits& digits) {
    BarPattern w{};
    w.fill(1);  // guards
    for (std::size_t g = 0; g < kDigitCount; ++g) {
        const auto& pat = kPattern1[static_cast<std::size_t>(digits[g])];
        std::copy(pat.begin(), pat.end(), w.begin() + static_cast<std::ptrdiff_t>(group_start(g)));
    }
    return w;
}

/// Checks every BarPattern invariant; throws InvalidArgument on violation.
inline void validate(const BarPattern& w) {
    int total = 0;
    for (std::size_t i = 0; i < kBarCount; ++i) {
        if (w[i] < 1 || w[i] > 4) throw InvalidArgument("bar width outside 1..4 at bar " + std::to_string(i + 1));
        if (is_guard_bar(i) && w[i] != 1) throw InvalidArgument("guard bar " + std::to_string(i + 1) + " not width 1");
        total += w[i];
    }
    if (total != static_cast<int>(kUnitCount)) throw InvalidArgument("bar widths do not sum to 95 units");
    for (std::size_t g = 0; g < kDigitCount; ++g) {
        const auto s = group_start(g);
        if (w[s] + w[s + 1] + w[s + 2] + w[s + 3] != kGroupWidth) {
            throw InvalidArgument("digit group " + std::to_string(g + 1) + " does not span 7 units");
        }
    }
}

/// Each width-w bar becomes w * points_per_unit samples of 1 (black) or 0 (white).
inline Signal pattern_to_signal(const BarPattern& pattern, std::size_t points_per_unit) {
    if (points_per_unit == 0) throw InvalidArgument("points_per_unit must be at least 1");
    validate(pattern);
    Vector v;
    v.reserve(kUnitCount * points_per_unit);
    for (std::size_t i = 0; i < kBarCount; ++i) {
        const double colour = i % 2 == 0 ? 1.0 : 0.0;
        v.insert(v.end(), static_cast<std::size_t>(pattern[i]) * points_per_unit, colour);
    }
    return Signal::on_midpoints(std::move(v));
}

/// Grid-aligned bits (1 = black) at points_per_unit samples per unit.
struct BinaryBarVector {
    std::vector<std::uint8_t> bits;
    std::size_t points_per_unit = 1;

    std::size_t size() const noexcept { return bits.size(); }
    friend bool operator==(const BinaryBarVector&, const BinaryBarVector&) = default;
};

inline std::size_t infer_points_per_unit(std::size_t n) {
    if (n == 0 || n % kUnitCount != 0) {
        throw InvalidArgument("signal length " + std::to_string(n) + " is not a positive multiple of 95");
    }
    return n / kUnitCount;
}

/// Midrange threshold: bit_j = 1 iff f_j >= (min f + max f)/2.
inline BinaryBarVector threshold_signal(std::span<const double> f) {
    const std::size_t p = infer_points_per_unit(f.size());
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    if (!(*lo < *hi)) throw DegenerateThresholdError("cannot threshold a constant signal");
    const double tau = 0.5 * (*lo + *hi);
    BinaryBarVector out;
    out.points_per_unit = p;
    out.bits.resize(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) out.bits[j] = f[j] >= tau ? 1 : 0;
    return out;
}

/// Standard UPC-A mod-10 check: 3*(odd positions) + (even positions) = 0 mod 10.
inline bool check_digit_valid(const UpcDigits& d) {
    int odd = 0;
    int even = 0;
    for (std::size_t i = 0; i < kDigitCount; ++i) (i % 2 == 0 ? odd : even) += d[i];
    return (3 * odd + even) % 10 == 0;
}

struct GroupDiagnostics {
    std::size_t group = 0;  // 0..11 in reading order
    std::array<std::size_t, 4> run_lengths{};
    WidthGroup widths{};
    double rounding_residual = 0.0;  // sum |raw width - rounded width|
    bool repaired = false;
    int column = 0;  // pattern column that matched: 1 or 2
    int digit = -1;
};

struct DecodeResult {
    UpcDigits digits;
    std::vector<GroupDiagnostics> groups;
    bool reversed = false;
    bool checksum_valid = false;
    std::size_t merged_runs = 0;  // sub-half-unit runs absorbed into neighbours
};

class DecodeError : public Error {
public:
    DecodeError(const std::string& what, std::optional<std::size_t> group = std::nullopt)
        : Error(ErrorKind::DecodeFailure, what), group_(group) {}

    /// Zero-based digit group that failed, when the failure is group-local.
    std::optional<std::size_t> group() const noexcept { return group_; }

private:
    std::optional<std::size_t> group_;
};

struct DecodeOptions {
    bool allow_reversed = false;
};

namespace detail {

struct Run {
    std::uint8_t colour;
    std::size_t length;
};

inline std::vector<Run> run_lengths(std::span<const std::uint8_t> bits) {
    std::vector<Run> runs;
    for (std::uint8_t b : bits) {
        const std::uint8_t c = b ? 1 : 0;
        if (runs.empty() || runs.back().colour != c) {
            runs.push_back({c, 1});
        } else {
            ++runs.back().length;
        }
    }
    return runs;
}

/// Absorbs runs shorter than half a unit into their neighbours, shortest
/// first (leftmost on ties). Returns the number of runs absorbed.
inline std::size_t merge_short_runs(std::vector<Run>& runs, std::size_t p) {
    std::size_t merged = 0;
    while (runs.size() > 1) {
        std::size_t idx = 0;
        for (std::size_t i = 1; i < runs.size(); ++i)
            if (runs[i].length < runs[idx].length) idx = i;
        if (2 * runs[idx].length >= p) break;
        const auto at = [&](std::size_t i) { return runs.begin() + static_cast<std::ptrdiff_t>(i); };
        if (idx == 0) {
            runs[1].length += runs[0].length;
            runs.erase(at(0));
        } else if (idx + 1 == runs.size()) {
            runs[idx - 1].length += runs[idx].length;
            runs.erase(at(idx));
        } else {
            runs[idx - 1].length += runs[idx].length + runs[idx + 1].length;
            runs.erase(at(idx), at(idx + 2));
        }
        ++merged;
    }
    return merged;
}

inline std::optional<std::pair<int, int>> lookup(const WidthGroup& w) {
    for (int d = 0; d < 10; ++d) {
        if (kPattern1[static_cast<std::size_t>(d)] == w) return std::pair{d, 1};
    }
    for (int d = 0; d < 10; ++d) {
        if (kPattern2[static_cast<std::size_t>(d)] == w) return std::pair{d, 2};
    }
    return std::nullopt;
}

/// Reads digit groups in scan order. Does not interpret orientation.
inline DecodeResult decode_forward(std::span<const std::uint8_t> bits, std::size_t p) {
    std::vector<Run> runs = run_lengths(bits);
    DecodeResult result;
    result.merged_runs = merge_short_runs(runs, p);

    if (runs.size() != kBarCount) {
        throw DecodeError("expected 59 bars, found " + std::to_string(runs.size()));
    }
    if (runs.front().colour != 1 || runs.back().colour != 1) {
        throw DecodeError("bar sequence must start and end with black");
    }

    const double dp = static_cast<double>(p);
    std::array<int, kBarCount> widths{};
    std::array<double, kBarCount> raw{};
    for (std::size_t i = 0; i < kBarCount; ++i) {
        raw[i] = static_cast<double>(runs[i].length) / dp;
        const long r = std::lround(raw[i]);
        if (r > 4) {
            throw DecodeError("bar " + std::to_string(i + 1) + " is " + std::to_string(r) + " units wide (max 4)");
        }
        widths[i] = static_cast<int>(std::max(1L, r));
        if (is_guard_bar(i) && widths[i] != 1) {
            throw DecodeError("guard bar " + std::to_string(i + 1) + " has width " + std::to_string(widths[i]));
        }
    }

    std::array<int, kDigitCount> digits{};
    for (std::size_t g = 0; g < kDigitCount; ++g) {
        const std::size_t s = group_start(g);
        GroupDiagnostics diag;
        diag.group = g;
        int sum = 0;
        for (std::size_t k = 0; k < 4; ++k) {
            diag.run_lengths[k] = runs[s + k].length;
            diag.widths[k] = widths[s + k];
            diag.rounding_residual += std::abs(raw[s + k] - widths[s + k]);
            sum += widths[s + k];
        }
        if (sum == kGroupWidth - 1 || sum == kGroupWidth + 1) {
            // Nudge the width whose rounding moved furthest in the wrong direction.
            const int dir = sum < kGroupWidth ? 1 : -1;
            std::size_t pick = 0;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < 4; ++k) {
                const double miss = dir * (raw[s + k] - diag.widths[k]);
                if (miss > best) {
                    best = miss;
                    pick = k;
                }
            }
            diag.widths[pick] += dir;
            diag.repaired = true;
            sum = kGroupWidth;
            if (diag.widths[pick] < 1 || diag.widths[pick] > 4) {
                throw DecodeError("digit group " + std::to_string(g + 1) + " cannot be repaired", g);
            }
        }
        if (sum != kGroupWidth) {
            throw DecodeError("digit group " + std::to_string(g + 1) + " spans " + std::to_string(sum) +
                                  " units instead of 7",
                              g);
        }
        const auto hit = lookup(diag.widths);
        if (!hit) {
            throw DecodeError("digit group " + std::to_string(g + 1) + " matches no digit pattern", g);
        }
        diag.digit = hit->first;
        diag.column = hit->second;
        digits[g] = hit->first;
        result.groups.push_back(diag);
    }
    result.digits = UpcDigits(digits);
    return result;
}

}  // namespace detail

/// Decodes a thresholded bar vector. A scan in which every group matches the
/// mirror column is a reversed read: rejected unless allow_reversed, in which
/// case digits are returned in symbol order with reversed = true.
inline DecodeResult decode_upc(const BinaryBarVector& bits, const DecodeOptions& options = {}) {
    if (bits.points_per_unit == 0 || bits.size() != kUnitCount * bits.points_per_unit) {
        throw InvalidArgument("bit vector length must be 95 * points_per_unit");
    }
    const std::size_t p = bits.points_per_unit;

    std::optional<DecodeError> forward_error;
    try {
        DecodeResult r = detail::decode_forward(bits.bits, p);
        const bool all_mirror =
            std::all_of(r.groups.begin(), r.groups.end(), [](const GroupDiagnostics& g) { return g.column == 2; });
        if (!all_mirror) {
            r.checksum_valid = check_digit_valid(r.digits);
            return r;
        }
        forward_error = DecodeError("scan appears reversed (every group matches the mirror pattern)");
    } catch (const DecodeError& e) {
        forward_error = e;
    }

    if (!options.allow_reversed) throw *forward_error;

    std::vector<std::uint8_t> rev(bits.bits.rbegin(), bits.bits.rend());
    DecodeResult r;
    try {
        r = detail::decode_forward(rev, p);
    } catch (const DecodeError&) {
        throw *forward_error;
    }
    const bool all_mirror =
        std::all_of(r.groups.begin(), r.groups.end(), [](const GroupDiagnostics& g) { return g.column == 2; });
    if (all_mirror) throw *forward_error;
    r.reversed = true;
    r.checksum_valid = check_digit_valid(r.digits);
    return r;
}

}  // namespace deblur::upc
