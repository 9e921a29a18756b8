#pragma once

#include <array>
#include <functional>
#include <string_view>
#include <vector>

namespace lrv {

enum class WindowKind { Bartlett, Quadratic, Truncated, Parzen };

std::string_view to_string(WindowKind kind) noexcept;

/// Parses "bartlett", "quadratic", "truncated" or "parzen" (case-insensitive).
WindowKind parse_window_kind(std::string_view name);

/// One polynomial piece of a window, w(x) = sum_d coeff[d] * x^d on lo <= x < hi.
struct WindowPiece {
  double lo;
  double hi;
  std::array<double, 4> coeff;
};

/**
 * Lag-window weight function w_b on [0, inf) with support endpoint b.
 *
 *   Bartlett   w_b(x) = 1 - x/b            on [0, b)
 *   Quadratic  w_b(x) = 1 - (x/b)^2        on [0, b)
 *   Truncated  w_b(x) = 1                  on [0, b)   (right-open indicator)
 *   Parzen     w_b(x) = 1 - 6y^2 + 6y^3    for y = x/b <= 1/2
 *              w_b(x) = 2 (1 - y)^3        for 1/2 < y < 1
 *
 * All kinds vanish for x >= b. The truncated window is discontinuous at b; every
 * other kind is continuous with w_b(0) = 1 and w_b(b) = 0.
 */
class Window {
 public:
  Window(WindowKind kind, double b);

  WindowKind kind() const noexcept { return kind_; }
  double b() const noexcept { return b_; }

  /// Unchecked evaluation; the caller guarantees x >= 0.
  double operator()(double x) const noexcept;

  /// Piecewise-polynomial form in x, ordered by lo. Pieces tile [0, b).
  std::vector<WindowPiece> pieces() const;

  /// Integral of w_b over [0, s] for s >= 0, in closed form.
  double integral(double s) const noexcept;

  /// Integral of u * w_b(u) over [0, s] for s >= 0, in closed form.
  double first_moment(double s) const noexcept;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  WindowKind kind_;
  double b_;
};

/// Checked evaluation: throws std::domain_error for negative or NaN x.
double eval_window(const Window& w, double x);

/// g_b(t) = int_0^t w_b + int_0^{1-t} w_b for t in [0, 1].
double g_b(const Window& w, double t);

/// int_0^1 (1 - t) w_b(t) dt.
double mean_weight(const Window& w);

/// Adaptive Simpson quadrature on [a, b] with absolute tolerance tol.
double integrate_adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol = 1e-10);

/// Quadrature versions of g_b and mean_weight. The closed forms above are checked against these.
double g_b_quadrature(const Window& w, double t);
double mean_weight_quadrature(const Window& w);

}  // namespace lrv
