// Copyright 2026 The lepto authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEPTO_NUMERIC_QUADRATURE_HPP
#define LEPTO_NUMERIC_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "lepto/errors.hpp"

namespace lepto {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1]. Kronrod nodes include the
// Gauss-7 nodes at the even positions of xgk.
namespace gk15 {
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};
}  // namespace gk15

// One Gauss-Kronrod 7-15 panel on [a, b]. Returns the Kronrod estimate and
// writes |K15 - G7| into err.
template <class F>
double gk15_panel(F&& f, double a, double b, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * gk15::xgk[i]);
    fv[14 - i] = f(c + h * gk15::xgk[i]);
  }
  fv[7] = f(c);
  double gauss = 0.0, kron = 0.0;
  for (int i = 0; i < 7; ++i) {
    kron += gk15::wgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += gk15::wg[i / 2] * (fv[i] + fv[14 - i]);
  }
  kron += gk15::wgk[7] * fv[7];
  gauss += gk15::wg[3] * fv[7];
  err = std::abs(h * (kron - gauss));
  return h * kron;
}

// Adaptive bisection with a worst-first priority queue. Converges when the
// summed panel error drops below max(abs_tol, rel_tol * |integral|).
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-11,
                 double rel_tol = 1e-11, int max_panels = 4000) {
  struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  if (a == b) return 0.0;
  double err0;
  double v0 = gk15_panel(f, a, b, err0);
  std::priority_queue<Panel> q;
  q.push({a, b, v0, err0});
  double total = v0, total_err = err0;
  int n_panels = 1;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (n_panels >= max_panels || q.empty()) {
      throw NumericalError("adaptive quadrature did not converge");
    }
    Panel p = q.top();
    q.pop();
    const double m = 0.5 * (p.a + p.b);
    double e1, e2;
    const double v1 = gk15_panel(f, p.a, m, e1);
    const double v2 = gk15_panel(f, m, p.b, e2);
    total += v1 + v2 - p.value;
    total_err += e1 + e2 - p.err;
    q.push({p.a, m, v1, e1});
    q.push({m, p.b, v2, e2});
    ++n_panels;
  }
  return total;
}

// Radius beyond which |f| stays below cutoff, found by doubling from r0 and
// checking a few interior probes per step. Used to truncate integrals over
// the real line.
template <class F>
double truncation_radius(F&& f, double cutoff = 1e-16, double r0 = 8.0,
                         double r_max = 1024.0) {
  double r = r0;
  auto small_at = [&](double x) {
    return std::abs(f(x)) < cutoff && std::abs(f(-x)) < cutoff;
  };
  while (r < r_max) {
    if (small_at(r) && small_at(1.13 * r) && small_at(1.39 * r)) return r;
    r *= 1.6;
  }
  throw NumericalError("integrand does not decay within the probe range");
}

// Integral over the whole real line, truncated where the integrand is below
// cutoff in absolute value.
template <class F>
double integrate_line(F&& f, double abs_tol = 1e-11, double rel_tol = 1e-11,
                      double cutoff = 1e-16) {
  const double r = truncation_radius(f, cutoff);
  // Split at zero so a kink or peak at the origin lands on a panel edge.
  return integrate(f, -r, 0.0, 0.5 * abs_tol, rel_tol) +
         integrate(f, 0.0, r, 0.5 * abs_tol, rel_tol);
}

}  // namespace lepto

#endif  // LEPTO_NUMERIC_QUADRATURE_HPP
