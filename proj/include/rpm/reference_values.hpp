#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace rpm::reference {

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt3 = std::numbers::sqrt3;
inline constexpr double ln2 = std::numbers::ln2;

/// Y^{(n)}(pi/3), n = 0..6, in closed form.
inline constexpr std::array<double, 7> kYAtPiThird = {
    4.0 / 3.0,
    -25.0 / (6 * sqrt3),
    18 * sqrt3 / pi - 3,
    463 / (8 * sqrt3) - 54 / pi - 243 * sqrt3 / (pi * pi),
    15059.0 / 18 - 9306 * sqrt3 / (5 * pi) + 972 / (pi * pi) + 3888 * sqrt3 / (pi * pi * pi),
    -33185 * sqrt3 / 4 + 8946 / pi + 72495 * sqrt3 / (pi * pi) - 19440 / (pi * pi * pi) - 72900 * sqrt3 / (pi * pi * pi * pi),
    -3938533.0 / 6 + 10658034 * sqrt3 / (7 * pi) - 425250 / (pi * pi) - 2658420 * sqrt3 / (pi * pi * pi) +
        437400 / (pi * pi * pi * pi) + 1574640 * sqrt3 / (pi * pi * pi * pi * pi),
};

/// Absolute tolerances for the values above.
inline constexpr std::array<double, 7> kYAtPiThirdTolerance = {1e-8, 1e-8, 1e-8, 1e-8, 1e-8, 1e-5, 1e-5};

/// Y(pi/2 + x) = 2/pi - (1/2 + 2/pi^2) x + (24 + 17 pi^2)/(9 pi^3) x^2 + O(x^3).
inline constexpr std::array<double, 3> kYAtPiHalfSeries = {2 / pi, -(0.5 + 2 / (pi * pi)),
                                                           (24 + 17 * pi * pi) / (9 * pi * pi * pi)};

/// Y(x) = 2 ln 2 / x^2 + ln 2 / 3 - 1/6 + O(x) as x -> 0.
inline constexpr double kYSmallGammaLeading = 2 * ln2;

/// Ytilde(x) = 2 e^{-x} + 10 e^{-3x} + 10 e^{-5x} + O(e^{-7x}).
inline constexpr std::array<double, 3> kYtildeSeries = {2, 10, 10};

/// Per-site stationary tile removal rate and the critical rate at beta = -ln 2.
inline constexpr double kTilesMeanPerSite = 5.0 / 8.0;
inline constexpr double kTilesCriticalPerSite = (4 * ln2 - 1) / 6;

/// L times the stationary global avalanche rate.
inline constexpr double kGlobalMeanScaled = 3.0 / 4.0;

/// L times the scaled covariance of the two counters.
inline constexpr double kCovarianceScaled = 1 - 3 * sqrt3 / (8 * pi);

/// Tiles cumulants c_n = lead[n] L + sub[n] / L, n = 1..4 (index 0 unused).
inline constexpr std::array<double, 5> kTilesCumulantLead = {
    0, 5.0 / 8, 9 * sqrt3 / (2 * pi) - 11.0 / 6, 217.0 / 32 - 243 / (4 * pi * pi),
    719.0 / 12 - 1701 * sqrt3 / (10 * pi) + 162 / (pi * pi) + 324 * sqrt3 / (pi * pi * pi)};
inline constexpr std::array<double, 5> kTilesCumulantSub = {
    0, -3.0 / 8, 3 * sqrt3 / (8 * pi) - 0.5, 81 / (16 * pi * pi),
    135 * sqrt3 / (8 * pi * pi * pi) + 27 / (2 * pi * pi) - 2};

/// Global cumulants c_n = coef[n] / L.
inline constexpr std::array<double, 5> kGlobalCumulant = {0, 0.75, 0.5 - 3 * sqrt3 / (8 * pi),
                                                          0.5 - 3 * sqrt3 / (4 * pi), 5.0 / 6 - 3 * sqrt3 / (2 * pi)};

}  // namespace rpm::reference
