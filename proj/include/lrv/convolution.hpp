#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lrv/windows.hpp"

namespace lrv {

/// Inclusive range of lags 1 <= k <= max_lag with lo <= k/scale < hi for one window piece.
struct LagRange {
  std::size_t first;
  std::size_t last;
  bool empty() const noexcept { return last < first; }
};

LagRange lag_range(const WindowPiece& piece, double scale, std::size_t max_lag);

/**
 * Strictly causal window filter: out[i] = sum_{j < i} w((i - j) / scale) * x[j].
 *
 * Runs in O(n * pieces) by carrying, for every polynomial piece of the window,
 * the moments sum_j ((i - j)/scale)^e x[j] over the piece's lag band and
 * advancing them with a binomial shift as i moves forward.
 */
void causal_window_convolution(std::span<const double> x, const Window& w, double scale,
                               std::span<double> out);

std::vector<double> causal_window_convolution(std::span<const double> x, const Window& w,
                                              double scale);

/// Direct O(n * bandwidth) double sum. Serial reference for the routine above.
std::vector<double> causal_window_convolution_direct(std::span<const double> x, const Window& w,
                                                     double scale);

}  // namespace lrv
