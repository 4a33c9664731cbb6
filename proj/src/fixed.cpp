#include "qcs/fixed.hpp"

namespace qcs {

int32_t fixed_clamp_raw(int64_t raw, bool* saturated) {
    if (raw > Fixed::max_raw) {
        if (saturated) *saturated = true;
        return Fixed::max_raw;
    }
    if (raw < Fixed::min_raw) {
        if (saturated) *saturated = true;
        return Fixed::min_raw;
    }
    return static_cast<int32_t>(raw);
}

// Round to nearest, ties away from zero.
static int64_t round_div(int64_t num, int64_t den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num >= 0) return (num + den / 2) / den;
    return -((-num + den / 2) / den);
}

Fixed Fixed::from_double(double x, bool* saturated) {
    double scaled = x * static_cast<double>(one_raw);
    if (scaled >= static_cast<double>(max_raw)) {
        if (saturated) *saturated = true;
        return from_raw(max_raw);
    }
    if (scaled <= static_cast<double>(min_raw)) {
        if (scaled < static_cast<double>(min_raw)) {
            if (saturated) *saturated = true;
        }
        return from_raw(min_raw);
    }
    return from_raw(static_cast<int32_t>(std::llround(scaled)));
}

Fixed Fixed::from_int(int64_t v, bool* saturated) {
    return from_raw(fixed_clamp_raw(v << frac_bits, saturated));
}

Fixed Fixed::add(Fixed o, bool* saturated) const {
    return from_raw(fixed_clamp_raw(int64_t{raw_} + o.raw_, saturated));
}

Fixed Fixed::sub(Fixed o, bool* saturated) const {
    return from_raw(fixed_clamp_raw(int64_t{raw_} - o.raw_, saturated));
}

Fixed Fixed::mul(Fixed o, bool* saturated) const {
    // Exact 64-bit product, one rounding back to Q3.28.
    int64_t prod = int64_t{raw_} * int64_t{o.raw_};
    return from_raw(fixed_clamp_raw(round_div(prod, one_raw), saturated));
}

Fixed Fixed::div(Fixed o, bool* saturated) const {
    if (o.raw_ == 0) {
        if (saturated) *saturated = true;
        return from_raw(raw_ >= 0 ? max_raw : min_raw);
    }
    int64_t num = int64_t{raw_} << frac_bits;
    return from_raw(fixed_clamp_raw(round_div(num, o.raw_), saturated));
}

Fixed Fixed::neg(bool* saturated) const {
    return from_raw(fixed_clamp_raw(-int64_t{raw_}, saturated));
}

Fixed Fixed::from_ratio(int64_t num, int64_t den, bool* saturated) {
    if (den == 0) {
        if (saturated) *saturated = true;
        return from_raw(num >= 0 ? max_raw : min_raw);
    }
    // num * 2^28 fits in __int128 for any int64 inputs.
    __int128 scaled = static_cast<__int128>(num) << frac_bits;
    __int128 d = den;
    if (d < 0) {
        scaled = -scaled;
        d = -d;
    }
    __int128 q;
    if (scaled >= 0)
        q = (scaled + d / 2) / d;
    else
        q = -((-scaled + d / 2) / d);
    if (q > max_raw) {
        if (saturated) *saturated = true;
        return from_raw(max_raw);
    }
    if (q < min_raw) {
        if (saturated) *saturated = true;
        return from_raw(min_raw);
    }
    return from_raw(static_cast<int32_t>(q));
}

}  // namespace qcs
