#include "lrv/windows.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lrv {

std::string_view to_string(WindowKind kind) noexcept {
  switch (kind) {
    case WindowKind::Bartlett: return "bartlett";
    case WindowKind::Quadratic: return "quadratic";
    case WindowKind::Truncated: return "truncated";
    case WindowKind::Parzen: return "parzen";
  }
  return "unknown";
}

WindowKind parse_window_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "bartlett") return WindowKind::Bartlett;
  if (lower == "quadratic") return WindowKind::Quadratic;
  if (lower == "truncated") return WindowKind::Truncated;
  if (lower == "parzen") return WindowKind::Parzen;
  throw std::invalid_argument("unknown window kind: " + std::string(name));
}

Window::Window(WindowKind kind, double b) : kind_(kind), b_(b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("window parameter b must be positive and finite");
  }
}

double Window::operator()(double x) const noexcept {
  if (x >= b_) return 0.0;
  const double y = x / b_;
  switch (kind_) {
    case WindowKind::Bartlett: return 1.0 - y;
    case WindowKind::Quadratic: return 1.0 - y * y;
    case WindowKind::Truncated: return 1.0;
    case WindowKind::Parzen:
      if (y <= 0.5) return 1.0 - 6.0 * y * y + 6.0 * y * y * y;
      {
        const double r = 1.0 - y;
        return 2.0 * r * r * r;
      }
  }
  return 0.0;
}

std::vector<WindowPiece> Window::pieces() const {
  const double b = b_;
  switch (kind_) {
    case WindowKind::Bartlett: return {{0.0, b, {1.0, -1.0 / b, 0.0, 0.0}}};
    case WindowKind::Quadratic: return {{0.0, b, {1.0, 0.0, -1.0 / (b * b), 0.0}}};
    case WindowKind::Truncated: return {{0.0, b, {1.0, 0.0, 0.0, 0.0}}};
    case WindowKind::Parzen: {
      const double b2 = b * b;
      const double b3 = b2 * b;
      // 2(1 - x/b)^3 expanded in powers of x.
      return {{0.0, 0.5 * b, {1.0, 0.0, -6.0 / b2, 6.0 / b3}},
              {0.5 * b, b, {2.0, -6.0 / b, 6.0 / b2, -2.0 / b3}}};
    }
  }
  return {};
}

double Window::integral(double s) const noexcept {
  const double t = std::min(std::max(s, 0.0), b_);
  const double b = b_;
  switch (kind_) {
    case WindowKind::Bartlett: return t - t * t / (2.0 * b);
    case WindowKind::Quadratic: return t - t * t * t / (3.0 * b * b);
    case WindowKind::Truncated: return t;
    case WindowKind::Parzen: {
      const double y = t / b;
      if (y <= 0.5) return b * (y - 2.0 * y * y * y + 1.5 * y * y * y * y);
      const double r = 1.0 - y;
      return b * (0.375 - 0.5 * r * r * r * r);
    }
  }
  return 0.0;
}

double Window::first_moment(double s) const noexcept {
  const double t = std::min(std::max(s, 0.0), b_);
  const double b = b_;
  switch (kind_) {
    case WindowKind::Bartlett: return t * t / 2.0 - t * t * t / (3.0 * b);
    case WindowKind::Quadratic: return t * t / 2.0 - t * t * t * t / (4.0 * b * b);
    case WindowKind::Truncated: return t * t / 2.0;
    case WindowKind::Parzen: {
      const double y = t / b;
      if (y <= 0.5) {
        const double y2 = y * y;
        return b * b * (y2 / 2.0 - 1.5 * y2 * y2 + 1.2 * y2 * y2 * y);
      }
      const double r = 1.0 - y;
      const double r4 = r * r * r * r;
      return b * b * (0.0875 - 0.5 * r4 + 0.4 * r4 * r);
    }
  }
  return 0.0;
}

double eval_window(const Window& w, double x) {
  if (!(x >= 0.0)) throw std::domain_error("window argument must be nonnegative");
  return w(x);
}

double g_b(const Window& w, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("g_b requires t in [0, 1]");
  return w.integral(t) + w.integral(1.0 - t);
}

double mean_weight(const Window& w) { return w.integral(1.0) - w.first_moment(1.0); }

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Integrates over [a, c] after splitting at the window's breakpoints so each
// panel sees a polynomial integrand.
double integrate_piecewise(const Window& w, const std::function<double(double)>& f, double a,
                           double c) {
  std::vector<double> cuts{a, c};
  for (const auto& piece : w.pieces()) {
    for (double x : {piece.lo, piece.hi}) {
      if (x > a && x < c) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    // Stay inside the half-open panel so the right-open truncated window is sampled correctly.
    const double lo = cuts[i];
    const double hi = std::nextafter(cuts[i + 1], lo);
    if (hi > lo) total += integrate_adaptive_simpson(f, lo, hi, 1e-12);
  }
  return total;
}

}  // namespace

double integrate_adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

double g_b_quadrature(const Window& w, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("g_b requires t in [0, 1]");
  auto f = [&w](double u) { return w(u); };
  return integrate_piecewise(w, f, 0.0, t) + integrate_piecewise(w, f, 0.0, 1.0 - t);
}

double mean_weight_quadrature(const Window& w) {
  return integrate_piecewise(w, [&w](double u) { return (1.0 - u) * w(u); }, 0.0, 1.0);
}

}  // namespace lrv
