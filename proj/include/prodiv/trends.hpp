#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace prodiv::trends {

struct Point {
    double year = 0.0;
    double value = 0.0;
};

// Annual values of one metric, strictly increasing in year.
struct AnnualSeries {
    std::string metric;
    std::optional<double> q;
    std::vector<Point> points;

    // Throws InputError when years are not strictly increasing.
    void validate() const;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    // Half-width of the two-sided confidence interval of the slope.
    double slope_ci = 0.0;
    double slope_stderr = 0.0;
    double confidence = 0.9;
};

// Ordinary least squares of value on year; the slope interval uses the
// Student-t quantile with n - 2 degrees of freedom. Throws InputError for
// fewer than three points and ComputeError when every year is equal.
LinearFit linear_fit(const AnnualSeries& series, double confidence = 0.9);

struct PermutationOptions {
    std::size_t permutations = 100000;
    std::uint64_t seed = 20240101;
    // Enumerate all n! orderings instead of sampling (only allowed for n <= 10).
    bool exhaustive = false;
};

struct TrendReport {
    std::string metric;
    std::optional<double> q;
    LinearFit fit;
    double r = 0.0;
    double p = 1.0;
    std::string stars;
};

// Pearson correlation of value with year. Throws ComputeError when either
// coordinate has zero variance.
double pearson_r(const AnnualSeries& series);

// Two-sided permutation p-value of |r|. Sampled permutations give
// (hits + 1) / (permutations + 1); exhaustive enumeration gives the exact
// fraction. Deterministic for a fixed seed.
double permutation_p_value(const AnnualSeries& series, const PermutationOptions& options = {});

// "***" for p <= 0.01, "**" for p <= 0.05, otherwise empty.
std::string significance_stars(double p);

TrendReport pearson_trend(const AnnualSeries& series, const PermutationOptions& options = {},
                          double confidence = 0.9);

// CSV `metric,q,slope,ci90,r,p,stars` (no comment header).
std::string reports_csv(const std::vector<TrendReport>& reports);

// Scatter plot with the fitted line.
std::string trend_svg(const AnnualSeries& series, const LinearFit& fit);

} // namespace prodiv::trends
