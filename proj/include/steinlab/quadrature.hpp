#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace steinlab {

// Adaptive 15-point Gauss-Kronrod quadrature. The embedded 7-point Gauss rule
// supplies the error estimate; intervals are bisected until the local estimate
// drops below the local share of the requested absolute tolerance.
namespace detail {

// Nodes/weights of the 15-point Kronrod rule on [-1,1] (positive half).
// The Gauss-7 weights pair with every other Kronrod node.
inline constexpr double gk_node[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * gk_node[i]);
    fv[14 - i] = f(c + h * gk_node[i]);
  }
  fv[7] = f(c);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double pair = (i == 7) ? fv[7] : fv[i] + fv[14 - i];
    resk += gk_wk[i] * pair;
    // every other Kronrod node (odd index, including the centre) is a Gauss node
    if (i % 2 == 1) resg += gk_wg[i / 2] * pair;
  }
  kronrod = resk * h;
  err = std::abs((resk - resg) * h);
}

}  // namespace detail

// Integrate f over [a,b] to absolute tolerance abstol. A panel is accepted
// once its error estimate meets its share of the tolerance or falls to the
// roundoff floor of its own value; subdividing past either point only walks
// the estimate around in circles. Throws when the depth cap is reached while
// the local estimate still exceeds the full requested tolerance.
template <class F>
double integrate(const F& f, double a, double b, double abstol = 1e-12,
                 int max_depth = 55) {
  struct Seg {
    double a, b, tol;
    int depth;
  };
  constexpr double kRoundoff = 64.0 * 2.220446049250313e-16;
  // Explicit stack keeps recursion depth bounded.
  Seg stack[2048];
  int top = 0;
  stack[top++] = {a, b, abstol, 0};
  double total = 0.0;
  while (top > 0) {
    Seg s = stack[--top];
    double val, err;
    detail::gk15(f, s.a, s.b, val, err);
    if (err <= s.tol || err <= kRoundoff * std::abs(val) ||
        s.depth >= max_depth) {
      if (s.depth >= max_depth && err > abstol &&
          err > kRoundoff * std::abs(val))
        throw std::runtime_error("integrate: failed to converge");
      total += val;
      continue;
    }
    if (top + 2 >= 2048) throw std::runtime_error("integrate: stack overflow");
    const double m = 0.5 * (s.a + s.b);
    stack[top++] = {s.a, m, 0.5 * s.tol, s.depth + 1};
    stack[top++] = {m, s.b, 0.5 * s.tol, s.depth + 1};
  }
  return total;
}

// Integrate f over [a, inf). Maps the tail onto a bounded interval with
// t = 1/x; f must decay fast enough for the transform to be integrable.
template <class F>
double integrate_to_inf(const F& f, double a, double abstol = 1e-12) {
  const double split = std::max(1.0, a);
  double head = 0.0;
  if (a < split) head = integrate(f, a, split, 0.5 * abstol);
  const auto tail = [&](double t) {
    const double x = 1.0 / t;
    return f(x) * x * x;
  };
  return head + integrate(tail, 0.0, 1.0 / split, 0.5 * abstol);
}

}  // namespace steinlab
