#include "ifsseq/rational.hpp"

#include <cmath>
#include <cstdio>

namespace ifsseq {

std::optional<Rational> recover_rational(double x, std::int64_t max_den, double tol)
{
    if (!std::isfinite(x) || std::abs(x) > 1e12)
        return std::nullopt;
    const bool negative = x < 0.0;
    double rest = std::abs(x);
    // Convergents h/k of the continued fraction of |x|.
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(rest));
    std::int64_t k_prev = 0, k = 1;
    double frac = rest - std::floor(rest);
    for (int iter = 0; iter < 64; ++iter) {
        if (std::abs(std::abs(x) - static_cast<double>(h) / static_cast<double>(k)) <= tol)
            return Rational{negative ? -h : h, k};
        if (frac <= 0.0)
            break;
        rest = 1.0 / frac;
        const double a_real = std::floor(rest);
        if (a_real > 1e12)
            break;
        frac = rest - a_real;
        const auto a = static_cast<std::int64_t>(a_real);
        const std::int64_t h_next = a * h + h_prev;
        const std::int64_t k_next = a * k + k_prev;
        if (k_next > max_den)
            break;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    return std::nullopt;
}

std::string format_decimal(double x, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0')
            s.pop_back();
        if (s.back() == '.')
            s.pop_back();
    }
    if (s == "-0")
        s = "0";
    return s;
}

std::string format_exact(double x)
{
    std::string s = format_decimal(x);
    if (const auto r = recover_rational(x); r && r->den > 1)
        s += " (" + std::to_string(r->num) + "/" + std::to_string(r->den) + ")";
    return s;
}

} // namespace ifsseq
