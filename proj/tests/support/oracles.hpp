#pragma once

// Test-side oracles: finite differences, quadrature, a Box-Muller normal
// sampler, and a chi-square tail probability. Independent of the library
// implementation paths they are used to check.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "glace/rng.hpp"

namespace oracle {

// Relative error with a floor so near-zero gradients compare on an absolute
// scale above finite-difference noise.
inline double rel_err(double a, double b, double floor_ = 1e-2) {
  return std::fabs(a - b) /
         std::max({std::fabs(a), std::fabs(b), floor_});
}

// Central finite difference of f with respect to *x.
inline double central_diff(const std::function<double()>& f, double* x,
                           double h = 1e-5) {
  const double saved = *x;
  *x = saved + h;
  const double up = f();
  *x = saved - h;
  const double down = f();
  *x = saved;
  return (up - down) / (2.0 * h);
}

// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int n = 40000) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int k = 1; k < n; ++k) acc += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

inline double normal01(glace::Rng& rng) {
  const double u1 = std::max(rng.uniform01(), 1e-300);
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// ---- regularized incomplete gamma (for the chi-square tail) ----

inline double gammln(double x) {
  static const double cof[6] = {76.18009172947146,   -86.50532032941677,
                                24.01409824083091,   -1.231739572450155,
                                0.1208650973866179e-2, -0.5395239384953e-5};
  double y = x;
  double tmp = x + 5.5;
  tmp -= (x + 0.5) * std::log(tmp);
  double ser = 1.000000000190015;
  for (int j = 0; j < 6; ++j) ser += cof[j] / ++y;
  return -tmp + std::log(2.5066282746310005 * ser / x);
}

inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ++ap;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - gammln(a));
}

inline double gamma_q_contfrac(double a, double x) {
  const double eps = 1e-15, fpmin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return std::exp(-x + a * std::log(x) - gammln(a)) * h;
}

// Q(a, x) = 1 - P(a, x)
inline double gammq(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

// Upper-tail probability of a chi-square statistic.
inline double chi2_pvalue(double stat, double dof) {
  return gammq(dof / 2.0, stat / 2.0);
}

}  // namespace oracle
