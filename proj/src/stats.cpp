#include "deep/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace deep {

char to_char(Sign s) { return static_cast<char>(s); }

Sign sign_from_char(char c) {
    switch (c) {
        case '+': return Sign::positive;
        case '-': return Sign::negative;
        case '?': return Sign::uncertain;
        default: throw std::invalid_argument(std::string("not a sign: '") + c + "'");
    }
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");

    // Acklam's rational approximation.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step against the exact CDF.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

namespace {

// Regularised incomplete gamma Q(a, x) via series / continued fraction.
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // P(a,x) by series, Q = 1 - P.
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - gln);
        return std::clamp(1.0 - p, 0.0, 1.0);
    }
    // Q(a,x) by Lentz continued fraction.
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - gln) * h;
    return std::clamp(q, 0.0, 1.0);
}

}  // namespace

double chi_squared_survival(double x, int df) {
    if (df <= 0) throw std::invalid_argument("chi_squared_survival: df must be positive");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

double z_critical_for(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("confidence level must be in (0,1)");
    const double eps = 1e-12;
    if (std::fabs(gamma - 0.90) < eps) return 1.645;
    if (std::fabs(gamma - 0.95) < eps) return 1.96;
    if (std::fabs(gamma - 0.99) < eps) return 2.576;
    return normal_quantile(0.5 * (1.0 + gamma));
}

SignTestConfig SignTestConfig::for_confidence(double gamma) {
    return {gamma, z_critical_for(gamma)};
}

SignTestConfig SignTestConfig::bonferroni(double gamma, int tests) {
    if (tests < 1) throw std::invalid_argument("bonferroni: tests must be >= 1");
    const double level = (1.0 - gamma) / tests;
    return {gamma, normal_quantile(1.0 - 0.5 * level)};
}

std::optional<double> critical_ratio(const CrossTable& t) {
    const double n1 = static_cast<double>(t.treated());
    const double n0 = static_cast<double>(t.control());
    if (n1 == 0.0 || n0 == 0.0) return std::nullopt;
    const double pb = t.p_bar();
    if (pb <= 0.0 || pb >= 1.0) return std::nullopt;
    const double inv = 1.0 / n1 + 1.0 / n0;
    const double num = std::fabs(t.p1() - t.p0()) - 0.5 * inv;
    return num / std::sqrt(pb * (1.0 - pb) * inv);
}

Sign sign_of_cate(const CrossTable& t, const SignTestConfig& cfg) {
    const std::optional<double> z = critical_ratio(t);
    if (!z || *z <= cfg.z_critical) return Sign::uncertain;
    if (t.p1() > t.p0()) return Sign::positive;
    if (t.p1() < t.p0()) return Sign::negative;
    return Sign::uncertain;
}

CITestResult ci_test(const BinaryDataset& d, int a, int b, const std::vector<int>& cond,
                     const CITestConfig& cfg) {
    if (a == b) throw std::invalid_argument("ci_test: a and b must differ");
    for (int v : cond) {
        if (v == a || v == b) throw std::invalid_argument("ci_test: cond overlaps a or b");
    }

    // Cell counts per stratum of cond: stratum key -> [n00, n01, n10, n11]
    // indexed by (value_a * 2 + value_b).
    const std::size_t n = d.n();
    std::unordered_map<std::uint64_t, std::array<std::uint64_t, 4>> strata;
    if (cond.size() <= 20) {
        strata.reserve(std::size_t{1} << std::min<std::size_t>(cond.size(), 12));
    }
    const BitColumn& ca = d.column(a);
    const BitColumn& cb = d.column(b);
    for (std::size_t r = 0; r < n; ++r) {
        std::uint64_t key = 0;
        for (int v : cond) key = (key << 1) | static_cast<std::uint64_t>(d.value(r, v));
        auto& cells = strata[key];
        cells[static_cast<std::size_t>(ca.get(r)) * 2 + static_cast<std::size_t>(cb.get(r))]++;
    }

    double g2 = 0.0;
    int df = 0;
    for (const auto& [key, cells] : strata) {
        const double c00 = static_cast<double>(cells[0]);
        const double c01 = static_cast<double>(cells[1]);
        const double c10 = static_cast<double>(cells[2]);
        const double c11 = static_cast<double>(cells[3]);
        const double r1 = c10 + c11, r0 = c00 + c01;
        const double k1 = c01 + c11, k0 = c00 + c10;
        if (r1 == 0.0 || r0 == 0.0 || k1 == 0.0 || k0 == 0.0) continue;
        const double total = r1 + r0;
        if (cfg.min_cell_expectation > 0.0) {
            const double smallest =
                std::min(std::min(r1 * k1, r1 * k0), std::min(r0 * k1, r0 * k0)) / total;
            if (smallest < cfg.min_cell_expectation) continue;
        }
        ++df;
        auto add = [&](double obs, double expect) {
            if (obs > 0.0) g2 += 2.0 * obs * std::log(obs / expect);
        };
        add(c11, r1 * k1 / total);
        add(c10, r1 * k0 / total);
        add(c01, r0 * k1 / total);
        add(c00, r0 * k0 / total);
    }

    CITestResult result;
    result.g2 = g2;
    result.df = df;
    if (df == 0) {
        result.p_value = 1.0;
        result.independent = true;
        result.low_power = true;
        return result;
    }
    result.p_value = chi_squared_survival(g2, df);
    result.independent = result.p_value > cfg.alpha;
    return result;
}

double correlation_with(const BinaryDataset& d, int x, int y) {
    if (x == y) throw std::invalid_argument("correlation_with: x and y must differ");
    const std::size_t n = d.n();
    const BitColumn& cx = d.column(x);
    const BitColumn& cy = d.column(y);
    std::uint64_t n1 = 0, m1 = 0, n11 = 0;
    for (std::size_t r = 0; r < n; ++r) {
        const bool vx = cx.get(r);
        const bool vy = cy.get(r);
        n1 += vx;
        m1 += vy;
        n11 += vx && vy;
    }
    const std::uint64_t n0 = n - n1, m0 = n - m1;
    if (n1 == 0 || n0 == 0 || m1 == 0 || m0 == 0) return 0.0;
    const double num = std::fabs(static_cast<double>(n) * static_cast<double>(n11) -
                                 static_cast<double>(n1) * static_cast<double>(m1));
    const double den = std::sqrt(static_cast<double>(n1) * static_cast<double>(n0) *
                                 static_cast<double>(m1) * static_cast<double>(m0));
    return num / den;
}

}  // namespace deep
