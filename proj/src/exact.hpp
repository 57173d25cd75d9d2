#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace howde::detail {

// A fractional threshold compared exactly against integer ratios. The value
// is the shortest decimal that round-trips to the given double, so 0.4 means
// 4/10 rather than the nearest binary fraction. Values whose decimal needs a
// denominator beyond 10^18 fall back to the exact binary value.
class Threshold {
 public:
  explicit Threshold(double t) : t_(t) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf - 1, t, std::chars_format::scientific);
    if (res.ec != std::errc{}) return;
    *res.ptr = '\0';
    const char* e = buf;
    while (e < res.ptr && *e != 'e') ++e;
    std::int64_t digits = 0;
    int n_digits = 0;
    bool negative = false;
    for (const char* c = buf; c < e; ++c) {
      if (*c == '-') negative = true;
      if (*c < '0' || *c > '9') continue;
      digits = digits * 10 + (*c - '0');
      ++n_digits;
    }
    const int exponent = std::atoi(e + 1);
    int scale = digits == 0 ? 0 : n_digits - 1 - exponent;  // t = digits / 10^scale
    if (negative) return;
    while (scale < 0 && digits <= INT64_MAX / 10) {
      digits *= 10;
      ++scale;
    }
    if (scale < 0 || scale > 18) return;
    std::int64_t q = 1;
    for (int i = 0; i < scale; ++i) q *= 10;
    p_ = digits;
    q_ = q;
    decimal_ = true;
  }

  // num / den >= threshold, for den > 0 and 0 <= num, den < 2^53.
  bool at_least(std::int64_t num, std::int64_t den) const {
    if (decimal_) return static_cast<__int128>(num) * q_ >= static_cast<__int128>(p_) * den;
    // t * den is split into a rounded product and its exact error term.
    const double n = static_cast<double>(num);
    const double d = static_cast<double>(den);
    const double p = t_ * d;
    const double err = std::fma(t_, d, -p);
    if (n > 2.0 * p && n > p) return true;
    if (n < 0.5 * p && n < p) return false;
    return n - p >= err;
  }

 private:
  double t_;
  bool decimal_ = false;
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
};

inline bool ratio_at_least(std::int64_t num, std::int64_t den, double threshold) {
  return Threshold(threshold).at_least(num, den);
}

}  // namespace howde::detail
