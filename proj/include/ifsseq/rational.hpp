#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace ifsseq {

struct Rational {
    std::int64_t num;
    std::int64_t den;
};

/// Continued-fraction recovery of p/q with q <= max_den and |x - p/q| <= tol.
std::optional<Rational> recover_rational(double x, std::int64_t max_den = 1'000'000, double tol = 1e-14);

/// Decimal with at most `digits` places and trailing zeros trimmed ("0.2", "0").
std::string format_decimal(double x, int digits = 10);

/// format_decimal(x), followed by " (p/q)" when a rational with q > 1 is recovered.
std::string format_exact(double x);

} // namespace ifsseq
