#pragma once

// Closed-form geodesics for F = a x^2 + b y^2 (constant a, b), derived by
// substituting the metric into the geodesic equations:
//   v'' = 0,  w'' = c (v')^2 w  for each transverse pair (w, c),
//   u'  from the conserved energy 2 u'v' + F (v')^2 + x'^2 + y'^2 = E.
// Everything here is independent of the numerical integrator it checks.

#include <cmath>

#include "prwave/analysis.hpp"

namespace prwave::testing {

namespace detail {

struct TransverseSolution {
  // value, derivative, and running integrals of w^2 and (w')^2 from 0 to s
  double w, dw, int_w2, int_dw2;
};

inline TransverseSolution transverse(double c, double dv0, double w0, double dw0,
                                     double s) {
  const double k = c * dv0 * dv0;
  TransverseSolution r{};
  if (k == 0.0) {
    r.w = w0 + dw0 * s;
    r.dw = dw0;
    r.int_w2 = w0 * w0 * s + w0 * dw0 * s * s + dw0 * dw0 * s * s * s / 3.0;
    r.int_dw2 = dw0 * dw0 * s;
    return r;
  }
  if (k < 0.0) {  // oscillator
    const double om = std::sqrt(-k);
    const double P = w0, Q = dw0 / om;
    const double s2 = std::sin(2 * om * s), c2 = std::cos(2 * om * s);
    r.w = P * std::cos(om * s) + Q * std::sin(om * s);
    r.dw = om * (-P * std::sin(om * s) + Q * std::cos(om * s));
    r.int_w2 = P * P * (s / 2 + s2 / (4 * om)) + Q * Q * (s / 2 - s2 / (4 * om)) +
               2 * P * Q * (1 - c2) / (4 * om);
    r.int_dw2 = om * om *
                (P * P * (s / 2 - s2 / (4 * om)) + Q * Q * (s / 2 + s2 / (4 * om)) -
                 2 * P * Q * (1 - c2) / (4 * om));
    return r;
  }
  const double la = std::sqrt(k);
  const double P = w0, Q = dw0 / la;
  const double sh = std::sinh(2 * la * s), ch = std::cosh(2 * la * s);
  r.w = P * std::cosh(la * s) + Q * std::sinh(la * s);
  r.dw = la * (P * std::sinh(la * s) + Q * std::cosh(la * s));
  r.int_w2 = P * P * (sh / (4 * la) + s / 2) + Q * Q * (sh / (4 * la) - s / 2) +
             2 * P * Q * (ch - 1) / (4 * la);
  r.int_dw2 = la * la *
              (P * P * (sh / (4 * la) - s / 2) + Q * Q * (sh / (4 * la) + s / 2) +
               2 * P * Q * (ch - 1) / (4 * la));
  return r;
}

}  // namespace detail

/// State of the plane-wave geodesic with F = a x^2 + b y^2 at parameter s.
inline GeodesicState plane_wave_geodesic(double a, double b,
                                         const GeodesicState& init, double s) {
  const double dv0 = init.velocity[kAxisV];
  const auto X =
      detail::transverse(a, dv0, init.position[kAxisX], init.velocity[kAxisX], s);
  const auto Y =
      detail::transverse(b, dv0, init.position[kAxisY], init.velocity[kAxisY], s);

  GeodesicState out;
  out.s = init.s + s;
  out.position[kAxisV] = init.position[kAxisV] + dv0 * s;
  out.velocity[kAxisV] = dv0;
  out.position[kAxisX] = X.w;
  out.velocity[kAxisX] = X.dw;
  out.position[kAxisY] = Y.w;
  out.velocity[kAxisY] = Y.dw;

  if (dv0 == 0.0) {
    // With v frozen all Christoffel contributions to u vanish.
    out.position[kAxisU] = init.position[kAxisU] + init.velocity[kAxisU] * s;
    out.velocity[kAxisU] = init.velocity[kAxisU];
    return out;
  }

  const double F0 = a * init.position[kAxisX] * init.position[kAxisX] +
                    b * init.position[kAxisY] * init.position[kAxisY];
  const double energy = 2 * init.velocity[kAxisU] * dv0 + F0 * dv0 * dv0 +
                        init.velocity[kAxisX] * init.velocity[kAxisX] +
                        init.velocity[kAxisY] * init.velocity[kAxisY];
  const double Fs = a * X.w * X.w + b * Y.w * Y.w;
  out.velocity[kAxisU] =
      (energy - Fs * dv0 * dv0 - X.dw * X.dw - Y.dw * Y.dw) / (2 * dv0);
  out.position[kAxisU] =
      init.position[kAxisU] +
      (energy * s - dv0 * dv0 * (a * X.int_w2 + b * Y.int_w2) -
       (X.int_dw2 + Y.int_dw2)) /
          (2 * dv0);
  return out;
}

}  // namespace prwave::testing
