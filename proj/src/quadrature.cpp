#include "qdet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace qdet {

namespace {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (symmetric; nonnegative
// abscissae listed).  Kronrod nodes interleave the 7-point Gauss rule; the
// embedded difference |K15 - G7| drives the panel error estimate.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  std::complex<double> integral;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const ComplexIntegrand& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);

  std::complex<double> fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);

  std::complex<double> k15{0.0, 0.0};
  for (int i = 0; i < 7; ++i) {
    k15 += kWgk[i] * (fv[i] + fv[14 - i]);
  }
  k15 += kWgk[7] * fv[7];

  // Gauss nodes are the odd-index Kronrod nodes.
  std::complex<double> g7{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    g7 += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  }
  g7 += kWg[3] * fv[7];

  Panel p;
  p.a = a;
  p.b = b;
  p.integral = h * k15;
  const double diff = std::abs(h * (k15 - g7));
  // Standard QUADPACK-style sharpening of the raw embedded difference.
  p.error = (diff > 0.0) ? diff * std::min(1.0, std::pow(200.0 * diff / (std::abs(p.integral) + 1e-300), 1.5))
                         : 0.0;
  p.error = std::max(p.error, 1e-300);
  return p;
}

}  // namespace

QuadratureResult adaptive_gauss_kronrod(const ComplexIntegrand& f,
                                        const std::vector<double>& breakpoints,
                                        double rel_tol, double abs_tol,
                                        int max_panels) {
  if (breakpoints.size() < 2) {
    throw std::invalid_argument("adaptive_gauss_kronrod: need >= 2 breakpoints");
  }
  std::priority_queue<Panel> heap;
  std::complex<double> total{0.0, 0.0};
  double err = 0.0;
  int n = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      throw std::invalid_argument("adaptive_gauss_kronrod: breakpoints not increasing");
    }
    Panel p = evaluate_panel(f, breakpoints[i], breakpoints[i + 1]);
    total += p.integral;
    err += p.error;
    heap.push(p);
    ++n;
  }

  auto tolerance = [&](void) {
    return std::max(rel_tol * std::abs(total), abs_tol);
  };

  while (err > tolerance() && n < max_panels) {
    Panel worst = heap.top();
    heap.pop();
    total -= worst.integral;
    err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Panel no longer splittable in double precision; keep its estimate.
      total += worst.integral;
      err += worst.error;
      break;
    }
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    total += left.integral + right.integral;
    err += left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }

  QuadratureResult r;
  r.value = total;
  r.error = err;
  r.panels = n;
  r.converged = (err <= tolerance());
  return r;
}

std::vector<double> geometric_breakpoints(double a, double b, int n) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  const double r = std::pow(b / a, 1.0 / n);
  double x = a;
  pts.push_back(a);
  for (int i = 1; i < n; ++i) {
    x *= r;
    pts.push_back(x);
  }
  pts.push_back(b);
  return pts;
}

std::vector<double> subdivide_panels(const std::vector<double>& breakpoints,
                                     double max_length) {
  if (!(max_length > 0.0) || !std::isfinite(max_length) || breakpoints.size() < 2) {
    return breakpoints;
  }
  std::vector<double> out;
  out.push_back(breakpoints.front());
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    const int n = std::min(512, static_cast<int>(std::ceil((b - a) / max_length)));
    for (int k = 1; k < n; ++k) {
      out.push_back(a + (b - a) * k / n);
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace qdet
