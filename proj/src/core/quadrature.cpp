/* Copyright 2026 The decouplab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "core/quadrature.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "core/error.hpp"

namespace decouplab {

QuadratureRule gaussLegendre(int n) {
  require(n >= 1, ErrorKind::Config, "Gauss-Legendre order must be positive");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    // Recompute the derivative at the converged root.
    double p1 = 1.0, p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

int gaussOrderForBandwidth(double a, int minOrder) {
  constexpr int kMaxOrder = 160;
  constexpr int kProbes = 16;
  for (int n = minOrder; n <= kMaxOrder; ++n) {
    const auto rule = gaussLegendre(n);
    bool ok = true;
    for (int k = 1; k <= kProbes && ok; ++k) {
      const double b = a * k / kProbes;
      std::complex<double> s = 0.0;
      for (int i = 0; i < n; ++i) s += rule.weights[i] * std::polar(1.0, b * rule.nodes[i]);
      const double exact = b == 0.0 ? 2.0 : 2.0 * std::sin(b) / b;
      ok = std::abs(s - exact) <= 1e-14;
    }
    if (ok) return n;
  }
  fail(ErrorKind::Budget, "phase bandwidth too large for the quadrature order limit");
}

}  // namespace decouplab
