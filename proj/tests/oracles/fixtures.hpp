#pragma once

// Small hand-built inputs shared by the unit tests and the acceptance binary,
// with expected values frozen from a 40-digit mpmath computation.

#include <string>
#include <vector>

namespace fixture {

// Six documents; "common" occurs in all of them.
inline std::vector<std::vector<std::string>> six_docs()
{
    return {
        {"engine", "engine", "turbine", "common"},
        {"engine", "rotor", "common"},
        {"software", "cloud", "cloud", "common"},
        {"software", "server", "common"},
        {"turbine", "rotor", "rotor", "common", "blade"},
        {"cloud", "server", "server", "common", "engine"},
    };
}

// Five documents; "rare" occurs in exactly one (document frequency 0.2).
inline std::vector<std::vector<std::string>> five_docs()
{
    return {{"rare", "mill"}, {"mill", "press"}, {"press", "lathe"}, {"lathe", "mill"}, {"press", "mill"}};
}

// Four-class profile used for the extended-precision checks.
inline std::vector<std::vector<double>> profile_z()
{
    return {{1.0, 0.3, 0.1, 0.0}, {0.3, 1.0, 0.5, 0.2}, {0.1, 0.5, 1.0, 0.4}, {0.0, 0.2, 0.4, 1.0}};
}
inline std::vector<double> profile_a() { return {0.4, 0.3, 0.2, 0.1}; }

inline constexpr double profile_q0 = 2.22165222678218574251406;
inline constexpr double profile_q_half = 2.182951907806067108045025;
inline constexpr double profile_q1 = 2.15049771942588936721809;
inline constexpr double profile_q2 = 2.100840336134453781512605;
inline constexpr double profile_q5 = 2.022715846110199729832229;

inline constexpr double shannon_5_3_2 = 1.029653014064573527415592;
inline constexpr double normalized_99_1 = 0.08079313589591117282486633;

// Eight firms in three classes; off-diagonal similarity 0.1 + 0.08 ((7i + 7j + ij) mod 10).
inline std::vector<int> specificity_classes() { return {10, 10, 10, 20, 20, 30, 30, 30}; }
inline std::vector<std::vector<double>> specificity_matrix()
{
    std::vector<std::vector<double>> m(8, std::vector<double>(8, 1.0));
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            if (i != j) {
                m[i][j] = 0.1 + 0.8 * static_cast<double>((i * 7 + j * 7 + i * j) % 10) / 10.0;
            }
        }
    }
    return m;
}
inline constexpr double specificity_within = 0.42;
inline constexpr double specificity_between = 0.4355555555555555555555556;
inline constexpr double specificity_ratio = 0.9642857142857142857142857;

// 21 points over 1997..2017: 3 - 0.05 (year - 1997) + 0.1 sin(1.7 k).
inline constexpr double noisy_slope = -0.04971238672691023953667088;
inline constexpr double noisy_intercept = 102.2778863766367114820407;
inline constexpr double noisy_stderr = 0.002620864329438042845458991;
inline constexpr double noisy_r = -0.9745969937253389836234953;

} // namespace fixture
