#pragma once

#include <cstdint>
#include <vector>

namespace gridlight::stats {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a).
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with df degrees of
/// freedom, i.e. P(X >= x).
double chi_square_sf(double x, int df);

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int df = 0;
};

/// Pearson chi-square of observed counts against expected probabilities.
/// Bins whose expected count falls below 5 are merged into their
/// neighbour until every bin clears the threshold.
ChiSquareResult chi_square(const std::vector<std::int64_t>& observed,
                           const std::vector<double>& expected_probs);

/// Two-sample chi-square: are two count histograms draws from the same
/// distribution? Uses the pooled estimate as the expectation.
ChiSquareResult chi_square_two_sample(const std::vector<std::int64_t>& a,
                                      const std::vector<std::int64_t>& b);

} // namespace gridlight::stats
