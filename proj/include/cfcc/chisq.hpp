#ifndef CFCC_CHISQ_HPP_
#define CFCC_CHISQ_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

namespace cfcc {

/// Upper regularized incomplete gamma Q(a, x).
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) return std::nan("");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) {
        // series for the lower half
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 2000; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    // Lentz continued fraction for the upper half
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 2000; ++i) {
        double an = -(double)i * ((double)i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

/// Survival function of the chi-square distribution.
inline double chi2_sf(double stat, double df) { return gamma_q(df / 2.0, stat / 2.0); }

/// Goodness-of-fit p-value for a uniform multinomial where only the
/// occupied cells are listed; `cells` is the true category count.
inline double chi_square_uniform_sparse_p(const std::vector<int64_t> &occupied, double cells,
                                          int64_t total) {
    if (cells <= 1.5) return 1.0; // deterministic outcome
    double expected = (double)total / cells;
    double stat = 0.0;
    for (int64_t o : occupied) {
        double d = (double)o - expected;
        stat += d * d / expected;
    }
    stat += (cells - (double)occupied.size()) * expected; // empty cells
    return chi2_sf(stat, cells - 1.0);
}

} // namespace cfcc

#endif // CFCC_CHISQ_HPP_
