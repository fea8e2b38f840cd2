#include "helpers.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "prodiv/error.hpp"
#include "prodiv/trends.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace prodiv;
using trends::AnnualSeries;

namespace {

AnnualSeries series(const std::vector<double>& years, const std::vector<double>& values, std::string metric = "m")
{
    AnnualSeries s;
    s.metric = std::move(metric);
    for (std::size_t i = 0; i < years.size(); ++i) {
        s.points.push_back({years[i], values[i]});
    }
    return s;
}

AnnualSeries noisy_series()
{
    std::vector<double> years;
    std::vector<double> values;
    for (int k = 0; k <= 20; ++k) {
        years.push_back(1997.0 + k);
        values.push_back(3.0 - 0.05 * k + 0.1 * std::sin(1.7 * k));
    }
    return series(years, values, "noisy");
}

std::vector<double> xs(const AnnualSeries& s)
{
    std::vector<double> out;
    for (const auto& p : s.points) {
        out.push_back(p.year);
    }
    return out;
}

std::vector<double> ys(const AnnualSeries& s)
{
    std::vector<double> out;
    for (const auto& p : s.points) {
        out.push_back(p.value);
    }
    return out;
}

} // namespace

TEST_SUITE("trends")
{
    TEST_CASE("perfect line")
    {
        const auto s = series({2000, 2001, 2002, 2003, 2004}, {1, 3, 5, 7, 9});
        const auto fit = trends::linear_fit(s);
        CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(fit.intercept == doctest::Approx(-3999.0).epsilon(1e-14));
        CHECK(fit.slope_ci == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(trends::pearson_r(s) == 1.0);
        const auto down = series({2000, 2001, 2002, 2003, 2004}, {9, 7, 5, 3, 1});
        CHECK(trends::pearson_r(down) == -1.0);
    }

    TEST_CASE("constant and near-constant series are undefined")
    {
        const auto flat = series({2000, 2001, 2002, 2003}, {4, 4, 4, 4});
        CHECK_THROWS_AS(trends::pearson_r(flat), ComputeError);
        CHECK_THROWS_AS(trends::permutation_p_value(flat), ComputeError);
        CHECK(trends::linear_fit(flat).slope == 0.0);

        const double one = 1.0;
        const auto rounding = series({2000, 2001, 2002, 2003}, {one, std::nextafter(one, 2.0), one, std::nextafter(one, 0.0)});
        CHECK_THROWS_AS(trends::pearson_r(rounding), ComputeError);

        const auto tiny = series({2000, 2001, 2002, 2003}, {1e-20, 2e-20, 3e-20, 4e-20});
        CHECK(trends::pearson_r(tiny) == doctest::Approx(1.0));
    }

    TEST_CASE("input validation")
    {
        CHECK_THROWS_AS(trends::linear_fit(series({2000, 2001}, {1, 2})), InputError);
        CHECK_THROWS_AS(trends::pearson_r(series({2001, 2000, 2002}, {1, 2, 3})), InputError);
        CHECK_THROWS_AS(trends::pearson_r(series({2000, 2000, 2002}, {1, 2, 3})), InputError);
        CHECK_THROWS_AS(trends::linear_fit(series({2000, 2001, 2002}, {1, 2, 4}), 1.0), ConfigError);
        trends::PermutationOptions none;
        none.permutations = 0;
        CHECK_THROWS_AS(trends::permutation_p_value(series({2000, 2001, 2002}, {1, 2, 4}), none), ConfigError);
    }

    TEST_CASE("noisy fit matches frozen extended-precision values")
    {
        const auto s = noisy_series();
        const auto fit = trends::linear_fit(s, 0.9);
        CHECK(fit.slope == doctest::Approx(fixture::noisy_slope).epsilon(1e-9));
        CHECK(fit.intercept == doctest::Approx(fixture::noisy_intercept).epsilon(1e-9));
        CHECK(fit.slope_stderr == doctest::Approx(fixture::noisy_stderr).epsilon(1e-9));
        CHECK(fit.slope_ci == doctest::Approx(oracle::t_quantile(0.9, 19.0) * fixture::noisy_stderr).epsilon(1e-9));
        CHECK(trends::pearson_r(s) == doctest::Approx(fixture::noisy_r).epsilon(1e-9));

        const auto o = oracle::least_squares(xs(s), ys(s));
        CHECK(fit.slope == doctest::Approx(static_cast<double>(o.slope)).epsilon(1e-9));
        CHECK(fit.slope_stderr == doctest::Approx(static_cast<double>(o.stderr_slope)).epsilon(1e-9));
    }

    TEST_CASE("correlation is invariant to affine maps of either axis")
    {
        const auto s = noisy_series();
        const double r = trends::pearson_r(s);
        auto shifted = s;
        for (auto& p : shifted.points) {
            p.value = 7.0 + 3.0 * p.value;
            p.year -= 1990.0;
        }
        CHECK(trends::pearson_r(shifted) == doctest::Approx(r).epsilon(1e-12));
        auto flipped = s;
        for (auto& p : flipped.points) {
            p.value = -p.value;
        }
        CHECK(trends::pearson_r(flipped) == doctest::Approx(-r).epsilon(1e-12));
    }

    TEST_CASE("permutation p-value is deterministic for a seed")
    {
        const auto s = series({2000, 2001, 2002, 2003, 2004, 2005, 2006}, {1.0, 1.4, 0.9, 1.8, 1.2, 2.1, 1.7});
        trends::PermutationOptions o;
        o.permutations = 25000;
        o.seed = 99;
        const double p = trends::permutation_p_value(s, o);
        CHECK(trends::permutation_p_value(s, o) == p);
        CHECK(p > 0.0);
        CHECK(p <= 1.0);
        o.seed = 100;
        CHECK(trends::permutation_p_value(s, o) != p);
    }

    TEST_CASE("exhaustive enumeration gives the exact p-value")
    {
        const auto line = series({2000, 2001, 2002, 2003, 2004}, {1, 2, 3, 4, 5});
        trends::PermutationOptions all;
        all.exhaustive = true;
        CHECK(trends::permutation_p_value(line, all) == doctest::Approx(2.0 / 120.0).epsilon(1e-15));

        const auto s = series({2000, 2001, 2002, 2003, 2004, 2005, 2006}, {1.0, 1.4, 0.9, 1.8, 1.2, 2.1, 1.7});
        const auto x = xs(s);
        const auto y = ys(s);
        const long double r_obs = std::fabs(oracle::pearson(x, y));
        std::vector<std::size_t> perm(y.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::size_t hits = 0;
        std::size_t total = 0;
        do {
            std::vector<double> py;
            for (auto k : perm) {
                py.push_back(y[k]);
            }
            hits += std::fabs(oracle::pearson(x, py)) >= r_obs - 1e-12L ? 1 : 0;
            ++total;
        } while (std::next_permutation(perm.begin(), perm.end()));
        const double exact = static_cast<double>(hits) / static_cast<double>(total);
        CHECK(trends::permutation_p_value(s, all) == doctest::Approx(exact).epsilon(1e-15));

        // The sampled estimate lands near the exact value.
        trends::PermutationOptions sampled;
        sampled.permutations = 200000;
        CHECK(std::abs(trends::permutation_p_value(s, sampled) - exact) < 0.005);

        CHECK_THROWS_AS(trends::permutation_p_value(noisy_series(), all), ConfigError);
    }

    TEST_CASE("stars")
    {
        CHECK(trends::significance_stars(0.009) == "***");
        CHECK(trends::significance_stars(0.01) == "***");
        CHECK(trends::significance_stars(0.011) == "**");
        CHECK(trends::significance_stars(0.049) == "**");
        CHECK(trends::significance_stars(0.05) == "**");
        CHECK(trends::significance_stars(0.051) == "");
        CHECK(trends::significance_stars(1.0) == "");
    }

    TEST_CASE("report and csv")
    {
        auto s = noisy_series();
        s.q = 2.0;
        trends::PermutationOptions o;
        o.permutations = 2000;
        const auto rep = trends::pearson_trend(s, o);
        CHECK(rep.metric == "noisy");
        CHECK(rep.q == 2.0);
        CHECK(rep.r < -0.97);
        CHECK(rep.p == doctest::Approx(1.0 / 2001.0));
        CHECK(rep.stars == "***");
        const auto csv = trends::reports_csv({rep});
        CHECK(csv.starts_with("metric,q,slope,ci90,r,p,stars\nnoisy,2,"));
        const auto svg = trends::trend_svg(s, rep.fit);
        CHECK(svg.starts_with("<svg"));
        CHECK(std::count(svg.begin(), svg.end(), '\n') == 25);
    }
}
