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

#pragma once

#include <cmath>

namespace decouplab::kernel {

// cos(2 pi t), sin(2 pi t) for any finite t. The argument is reduced to a
// quarter-turn index and a remainder in [-1/8, 1/8]; Taylor polynomials of
// degree 15/16 are accurate to ~1e-16 on that interval.
inline void sincos2pi(double t, double& c, double& s) {
  t -= std::nearbyint(t);
  const double q = std::nearbyint(4.0 * t);
  const double r = t - 0.25 * q;
  const double z = 6.283185307179586476925 * r;
  const double z2 = z * z;

  double sp = 1.0 / 1307674368000.0;  // 1/15!
  sp = sp * -z2 + 1.0 / 6227020800.0;
  sp = sp * -z2 + 1.0 / 39916800.0;
  sp = sp * -z2 + 1.0 / 362880.0;
  sp = sp * -z2 + 1.0 / 5040.0;
  sp = sp * -z2 + 1.0 / 120.0;
  sp = sp * -z2 + 1.0 / 6.0;
  sp = sp * -z2 + 1.0;
  const double sn = z * sp;

  double cp = 1.0 / 20922789888000.0;  // 1/16!
  cp = cp * -z2 + 1.0 / 87178291200.0;
  cp = cp * -z2 + 1.0 / 479001600.0;
  cp = cp * -z2 + 1.0 / 3628800.0;
  cp = cp * -z2 + 1.0 / 40320.0;
  cp = cp * -z2 + 1.0 / 720.0;
  cp = cp * -z2 + 1.0 / 24.0;
  cp = cp * -z2 + 0.5;
  const double cs = cp * -z2 + 1.0;

  // Multiply by i^q, q in {-2..2}.
  const int qm = static_cast<int>(q) & 3;
  const bool swap = qm & 1;
  const double cc = swap ? sn : cs;
  const double ss = swap ? cs : sn;
  c = (qm == 1 || qm == 2) ? -cc : cc;
  s = (qm >= 2) ? -ss : ss;
}

}  // namespace decouplab::kernel
