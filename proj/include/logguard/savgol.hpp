#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace logguard {

/// Least-squares weights that evaluate the degree-`poly` fit through the
/// points at integer offsets [-left, right] at offset 0. The degree drops to
/// left + right when fewer points are available.
std::vector<double> savgol_weights(std::size_t left, std::size_t right, std::size_t poly);

/// Savitzky-Golay smoothing. Each output point is the centre value of the
/// polynomial fitted to the window around it; near the ends the window is
/// truncated to the available points instead of padded.
std::vector<double> savitzky_golay(std::span<const double> series, std::size_t window = 501,
                                   std::size_t poly = 2);

}  // namespace logguard
