#include "gridlight/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gridlight::stats {

namespace {

// Series expansion of the lower regularized gamma P(a, x), valid x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid x >= a+1 (Lentz's method).
double gamma_q_cf(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) {
        throw std::domain_error("gamma_q requires a > 0, x >= 0");
    }
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double x, int df) {
    if (df < 1) throw std::domain_error("chi_square_sf: df must be >= 1");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

ChiSquareResult chi_square(const std::vector<std::int64_t>& observed,
                           const std::vector<double>& expected_probs) {
    if (observed.size() != expected_probs.size() || observed.size() < 2) {
        throw std::invalid_argument("chi_square: need >= 2 matching categories");
    }
    std::int64_t total = 0;
    for (auto c : observed) total += c;
    if (total <= 0) throw std::invalid_argument("chi_square: empty observation");

    // Merge low-expectation bins left to right until each expected count
    // is at least 5.
    std::vector<double> obs;
    std::vector<double> exp;
    double acc_o = 0.0;
    double acc_e = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        acc_o += static_cast<double>(observed[i]);
        acc_e += expected_probs[i] * static_cast<double>(total);
        if (acc_e >= 5.0) {
            obs.push_back(acc_o);
            exp.push_back(acc_e);
            acc_o = 0.0;
            acc_e = 0.0;
        }
    }
    if (acc_e > 0.0 || acc_o > 0.0) {
        if (exp.empty()) {
            obs.push_back(acc_o);
            exp.push_back(acc_e);
        } else {
            obs.back() += acc_o;
            exp.back() += acc_e;
        }
    }
    if (obs.size() < 2) {
        throw std::invalid_argument("chi_square: degenerate categories after merging");
    }

    double stat = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        double diff = obs[i] - exp[i];
        stat += diff * diff / exp[i];
    }
    int df = static_cast<int>(obs.size()) - 1;
    return {stat, chi_square_sf(stat, df), df};
}

ChiSquareResult chi_square_two_sample(const std::vector<std::int64_t>& a,
                                      const std::vector<std::int64_t>& b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("chi_square_two_sample: need matching histograms");
    }
    double na = 0.0;
    double nb = 0.0;
    for (auto c : a) na += static_cast<double>(c);
    for (auto c : b) nb += static_cast<double>(c);
    if (na <= 0.0 || nb <= 0.0) {
        throw std::invalid_argument("chi_square_two_sample: empty sample");
    }

    // Pool and merge bins with a small pooled expectation.
    struct Bin { double a, b; };
    std::vector<Bin> bins;
    double acc_a = 0.0;
    double acc_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc_a += static_cast<double>(a[i]);
        acc_b += static_cast<double>(b[i]);
        double pooled = (acc_a + acc_b) / (na + nb);
        if (pooled * na >= 5.0 && pooled * nb >= 5.0) {
            bins.push_back({acc_a, acc_b});
            acc_a = acc_b = 0.0;
        }
    }
    if ((acc_a > 0.0 || acc_b > 0.0) && !bins.empty()) {
        bins.back().a += acc_a;
        bins.back().b += acc_b;
    }
    if (bins.size() < 2) {
        throw std::invalid_argument("chi_square_two_sample: degenerate categories");
    }

    double stat = 0.0;
    for (const auto& bin : bins) {
        double pooled = (bin.a + bin.b) / (na + nb);
        double ea = pooled * na;
        double eb = pooled * nb;
        stat += (bin.a - ea) * (bin.a - ea) / ea;
        stat += (bin.b - eb) * (bin.b - eb) / eb;
    }
    int df = static_cast<int>(bins.size()) - 1;
    return {stat, chi_square_sf(stat, df), df};
}

} // namespace gridlight::stats
