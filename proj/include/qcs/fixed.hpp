#pragma once

#include <cstdint>
#include <cmath>
#include <compare>
#include <limits>

namespace qcs {

// Signed fixed-point value, Q3.28: 28 fractional bits, range [-8, 8).
// All arithmetic saturates at the range boundaries instead of wrapping;
// callers that care pass a flag pointer to learn whether clamping happened.
class Fixed {
  public:
    static constexpr int frac_bits = 28;
    static constexpr int64_t one_raw = int64_t{1} << frac_bits;
    static constexpr int32_t max_raw = std::numeric_limits<int32_t>::max();
    static constexpr int32_t min_raw = std::numeric_limits<int32_t>::min();

    constexpr Fixed() : raw_(0) {}

    static constexpr Fixed from_raw(int32_t raw) {
        Fixed f;
        f.raw_ = raw;
        return f;
    }

    // Round-to-nearest quantization; |x| >= 8 clamps and sets *saturated.
    static Fixed from_double(double x, bool* saturated = nullptr);

    static Fixed from_int(int64_t v, bool* saturated = nullptr);

    constexpr int32_t raw() const { return raw_; }
    double to_double() const { return static_cast<double>(raw_) / static_cast<double>(one_raw); }
    int32_t to_int() const { return static_cast<int32_t>(raw_ >> frac_bits); }  // floor

    Fixed add(Fixed o, bool* saturated = nullptr) const;
    Fixed sub(Fixed o, bool* saturated = nullptr) const;
    Fixed mul(Fixed o, bool* saturated = nullptr) const;
    Fixed div(Fixed o, bool* saturated = nullptr) const;
    Fixed neg(bool* saturated = nullptr) const;

    // Exact rational division of two integers into Q3.28, one rounding.
    static Fixed from_ratio(int64_t num, int64_t den, bool* saturated = nullptr);

    constexpr auto operator<=>(const Fixed&) const = default;

  private:
    int32_t raw_;
};

// Saturating clamp of a raw value held in 64 bits.
int32_t fixed_clamp_raw(int64_t raw, bool* saturated);

inline Fixed quantize(double x, bool* saturated = nullptr) { return Fixed::from_double(x, saturated); }
inline double widen(Fixed x) { return x.to_double(); }

}  // namespace qcs
