#include "prodiv/trends.hpp"

#include "prodiv/artifacts.hpp"
#include "prodiv/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace prodiv::trends {

namespace {

__extension__ using uint128 = unsigned __int128;

constexpr std::size_t batch_size = 10000;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Centered {
    std::vector<double> x;
    std::vector<double> y;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double scale_y = 0.0;

    // Values equal up to rounding (e.g. an identity that holds analytically)
    // count as constant.
    bool constant_y() const
    {
        const double tol = 1e-12 * scale_y;
        return !(syy > static_cast<double>(y.size()) * tol * tol);
    }
};

Centered center(const AnnualSeries& series)
{
    Centered c;
    const auto n = static_cast<double>(series.points.size());
    for (const auto& p : series.points) {
        c.mean_x += p.year;
        c.mean_y += p.value;
        c.scale_y = std::max(c.scale_y, std::abs(p.value));
    }
    c.mean_x /= n;
    c.mean_y /= n;
    for (const auto& p : series.points) {
        const double dx = p.year - c.mean_x;
        const double dy = p.value - c.mean_y;
        c.x.push_back(dx);
        c.y.push_back(dy);
        c.sxx += dx * dx;
        c.syy += dy * dy;
        c.sxy += dx * dy;
    }
    return c;
}

void require_points(const AnnualSeries& series)
{
    series.validate();
    if (series.points.size() < 3) {
        throw InputError("series '" + series.metric + "' needs at least 3 points, has " +
                         std::to_string(series.points.size()));
    }
}

} // namespace

void AnnualSeries::validate() const
{
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].year > points[i - 1].year)) {
            throw InputError("series '" + metric + "' years must be strictly increasing");
        }
    }
}

LinearFit linear_fit(const AnnualSeries& series, double confidence)
{
    if (series.points.size() < 3) {
        throw InputError("linear fit of '" + series.metric + "' needs at least 3 points");
    }
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw ConfigError("confidence level must lie in (0, 1)");
    }
    const auto c = center(series);
    if (!(c.sxx > 0.0)) {
        throw ComputeError("linear fit of '" + series.metric + "': all years are equal");
    }
    series.validate();
    LinearFit fit;
    fit.confidence = confidence;
    fit.slope = c.sxy / c.sxx;
    fit.intercept = c.mean_y - fit.slope * c.mean_x;
    double sse = 0.0;
    for (const auto& p : series.points) {
        const double r = p.value - (fit.intercept + fit.slope * p.year);
        sse += r * r;
    }
    const double dof = static_cast<double>(series.points.size() - 2);
    fit.slope_stderr = std::sqrt(sse / dof / c.sxx);
    const boost::math::students_t dist(dof);
    const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
    fit.slope_ci = t * fit.slope_stderr;
    return fit;
}

double pearson_r(const AnnualSeries& series)
{
    require_points(series);
    const auto c = center(series);
    if (!(c.sxx > 0.0) || c.constant_y()) {
        throw ComputeError("Pearson correlation of '" + series.metric + "' is undefined: zero variance");
    }
    return std::clamp(c.sxy / std::sqrt(c.sxx * c.syy), -1.0, 1.0);
}

double permutation_p_value(const AnnualSeries& series, const PermutationOptions& options)
{
    require_points(series);
    const auto c = center(series);
    if (!(c.sxx > 0.0) || c.constant_y()) {
        throw ComputeError("permutation test of '" + series.metric + "' is undefined: zero variance");
    }
    const std::size_t n = c.x.size();
    // |r| >= |r_obs| is equivalent to |sum x_i y_pi(i)| >= |sxy|; the slack
    // keeps exact ties (e.g. reversed perfect lines) counted.
    const double observed = std::abs(c.sxy) - 1e-12 * std::sqrt(c.sxx * c.syy);
    const auto hit = [&](const std::vector<std::size_t>& perm) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += c.x[i] * c.y[perm[i]];
        }
        return std::abs(s) >= observed;
    };

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    if (options.exhaustive) {
        if (n > 10) {
            throw ConfigError("exhaustive permutation test is limited to 10 points");
        }
        std::size_t hits = 0;
        std::size_t total = 0;
        do {
            hits += hit(perm) ? 1 : 0;
            ++total;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return static_cast<double>(hits) / static_cast<double>(total);
    }

    if (options.permutations == 0) {
        throw ConfigError("permutation count must be positive");
    }
    // Batches draw from independent seeded streams; their integer counts merge
    // the same way in any order.
    std::size_t hits = 0;
    const std::size_t batches = (options.permutations + batch_size - 1) / batch_size;
    for (std::size_t b = 0; b < batches; ++b) {
        std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(b)));
        const std::size_t count = std::min(batch_size, options.permutations - b * batch_size);
        for (std::size_t k = 0; k < count; ++k) {
            for (std::size_t i = n; i > 1; --i) {
                const auto j = static_cast<std::size_t>((static_cast<uint128>(rng()) * i) >> 64);
                std::swap(perm[i - 1], perm[j]);
            }
            hits += hit(perm) ? 1 : 0;
        }
    }
    return static_cast<double>(hits + 1) / static_cast<double>(options.permutations + 1);
}

std::string significance_stars(double p)
{
    if (p <= 0.01) {
        return "***";
    }
    if (p <= 0.05) {
        return "**";
    }
    return "";
}

TrendReport pearson_trend(const AnnualSeries& series, const PermutationOptions& options, double confidence)
{
    TrendReport report;
    report.metric = series.metric;
    report.q = series.q;
    report.r = pearson_r(series);
    report.p = permutation_p_value(series, options);
    report.stars = significance_stars(report.p);
    report.fit = linear_fit(series, confidence);
    return report;
}

std::string reports_csv(const std::vector<TrendReport>& reports)
{
    std::string out = "metric,q,slope,ci90,r,p,stars\n";
    for (const auto& r : reports) {
        out += artifacts::csv_row({r.metric, r.q ? artifacts::format_real(*r.q) : std::string(),
                                   artifacts::format_real(r.fit.slope), artifacts::format_real(r.fit.slope_ci),
                                   artifacts::format_real(r.r), artifacts::format_real(r.p), r.stars});
    }
    return out;
}

std::string trend_svg(const AnnualSeries& series, const LinearFit& fit)
{
    constexpr double width = 480;
    constexpr double height = 320;
    constexpr double margin = 40;
    double x0 = series.points.front().year;
    double x1 = series.points.back().year;
    double y0 = series.points.front().value;
    double y1 = y0;
    for (const auto& p : series.points) {
        y0 = std::min({y0, p.value, fit.intercept + fit.slope * p.year});
        y1 = std::max({y1, p.value, fit.intercept + fit.slope * p.year});
    }
    if (x1 == x0) {
        x1 = x0 + 1;
    }
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const auto sx = [&](double x) { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); };
    const auto sy = [&](double y) { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); };

    char buffer[256];
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"320\">\n";
    std::snprintf(buffer, sizeof buffer, "<text x=\"%g\" y=\"20\" font-size=\"12\">%s</text>\n", margin,
                  series.metric.c_str());
    out += buffer;
    std::snprintf(buffer, sizeof buffer,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"steelblue\" stroke-width=\"2\"/>\n",
                  sx(x0), sy(fit.intercept + fit.slope * x0), sx(x1), sy(fit.intercept + fit.slope * x1));
    out += buffer;
    for (const auto& p : series.points) {
        std::snprintf(buffer, sizeof buffer, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"black\"/>\n", sx(p.year),
                      sy(p.value));
        out += buffer;
    }
    out += "</svg>\n";
    return out;
}

} // namespace prodiv::trends
