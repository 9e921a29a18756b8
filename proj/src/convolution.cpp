#include "lrv/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lrv {

LagRange lag_range(const WindowPiece& piece, double scale, std::size_t max_lag) {
  auto x_of = [scale](std::size_t k) { return static_cast<double>(k) / scale; };
  const double cap = static_cast<double>(max_lag);

  double lo_guess = std::ceil(piece.lo * scale);
  std::size_t first = lo_guess < 1.0 ? 1 : static_cast<std::size_t>(std::min(lo_guess, cap + 1.0));
  while (first > 1 && x_of(first - 1) >= piece.lo) --first;
  while (first <= max_lag && x_of(first) < piece.lo) ++first;

  double hi_guess = std::ceil(piece.hi * scale);
  std::size_t last = hi_guess < 1.0 ? 0 : static_cast<std::size_t>(std::min(hi_guess, cap + 1.0));
  while (last > 0 && x_of(last) >= piece.hi) --last;
  while (last < max_lag && x_of(last + 1) < piece.hi) ++last;
  last = std::min(last, max_lag);

  if (first > last) return {1, 0};
  return {first, last};
}

void causal_window_convolution(std::span<const double> x, const Window& w, double scale,
                               std::span<double> out) {
  if (!(scale > 0.0)) throw std::invalid_argument("convolution scale must be positive");
  if (out.size() != x.size()) throw std::invalid_argument("output length must match input");
  const std::size_t n = x.size();
  std::fill(out.begin(), out.end(), 0.0);
  if (n < 2) return;

  const double inv = 1.0 / scale;
  const double inv2 = inv * inv;
  const double inv3 = inv2 * inv;

  for (const auto& piece : w.pieces()) {
    const LagRange range = lag_range(piece, scale, n - 1);
    if (range.empty()) continue;
    int degree = 3;
    while (degree > 0 && piece.coeff[degree] == 0.0) --degree;

    const double add_x = static_cast<double>(range.first) * inv;
    const double drop_x = static_cast<double>(range.last + 1) * inv;
    const double add_pow[4] = {1.0, add_x, add_x * add_x, add_x * add_x * add_x};
    const double drop_pow[4] = {1.0, drop_x, drop_x * drop_x, drop_x * drop_x * drop_x};

    double m0 = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      // Every retained lag grows by one step of 1/scale.
      switch (degree) {
        case 3: m3 += 3.0 * inv * m2 + 3.0 * inv2 * m1 + inv3 * m0; [[fallthrough]];
        case 2: m2 += 2.0 * inv * m1 + inv2 * m0; [[fallthrough]];
        case 1: m1 += inv * m0; [[fallthrough]];
        default: break;
      }
      if (i >= range.first) {
        const double v = x[i - range.first];
        m0 += v;
        if (degree >= 1) m1 += v * add_pow[1];
        if (degree >= 2) m2 += v * add_pow[2];
        if (degree >= 3) m3 += v * add_pow[3];
      }
      if (i >= range.last + 1) {
        const double v = x[i - range.last - 1];
        m0 -= v;
        if (degree >= 1) m1 -= v * drop_pow[1];
        if (degree >= 2) m2 -= v * drop_pow[2];
        if (degree >= 3) m3 -= v * drop_pow[3];
      }
      out[i] += piece.coeff[0] * m0 + piece.coeff[1] * m1 + piece.coeff[2] * m2 +
                piece.coeff[3] * m3;
    }
  }
}

std::vector<double> causal_window_convolution(std::span<const double> x, const Window& w,
                                              double scale) {
  std::vector<double> out(x.size());
  causal_window_convolution(x, w, scale, out);
  return out;
}

std::vector<double> causal_window_convolution_direct(std::span<const double> x, const Window& w,
                                                     double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("convolution scale must be positive");
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= i; ++k) {
      const double lag = static_cast<double>(k) / scale;
      if (lag >= w.b()) break;
      acc += w(lag) * x[i - k];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace lrv
