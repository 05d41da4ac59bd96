#!/usr/bin/env python3
# Copyright 2026 The decouplab Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# Regenerates tests/oracle_values.hpp. Values are computed independently of
# the library: g by adaptive high-precision quadrature (mpmath), lattice sets
# by direct enumeration, weights and densities by closed forms.
import math
import sys

import mpmath as mp

mp.mp.dps = 30


def lattice_scale(R, sigma):
    v = R ** sigma
    r = round(v)
    return float(r) if abs(v - r) <= 1e-9 * max(1.0, abs(v)) else v


def cube_centers(R, sigma):
    s = lattice_scale(R, sigma)
    n = math.ceil(s) - 1
    return [mp.mpf(l) / mp.mpf(s) for l in range(1, n + 1)]


def line_integral(a, b, c, h):
    # int_{c-h}^{c+h} exp(2 pi i (a t + b t^2)) dt
    f = lambda t: mp.expj(2 * mp.pi * (a * t + b * t * t))
    pts = mp.linspace(c - h, c + h, 17)
    return mp.quad(f, pts)


def g(d, sigma, R, x):
    R = mp.mpf(R)
    h = 1 / R
    centers = cube_centers(float(R), sigma)
    x = [mp.mpf(v) for v in x]
    xd = x[-1]
    total = mp.mpc(1)
    for j in range(d - 1):
        total *= sum(line_integral(x[j], xd, c, h) for c in centers)
    return total


def lattice_count(d, sigma, R, cd=0.125):
    s1 = lattice_scale(R, sigma)
    s2 = s1 * s1
    radius = cd * R
    margin = 0.5 * math.sqrt(d)
    ranges = []
    for j in range(d):
        step = s1 if j < d - 1 else s2
        k = int(math.floor(radius / step))
        ranges.append(range(-k, k + 1))
    count = 0

    def rec(j, acc):
        nonlocal count
        if j == d:
            if math.sqrt(sum(v * v for v in acc)) + margin <= radius:
                count += 1
            return
        step = s1 if j < d - 1 else s2
        for n in ranges[j]:
            rec(j + 1, acc + [n * step])

    rec(0, [])
    return count


def weighted_integral(d, R, N):
    R = mp.mpf(R)
    cutoff = R * mp.power(10, mp.mpf(12) / N)
    ball = mp.pi ** (mp.mpf(d) / 2) / mp.gamma(mp.mpf(d) / 2 + 1)
    sphere = d * ball
    inner = ball * R ** d
    tail = mp.quad(lambda r: sphere * r ** (d - 1) * (r / R) ** (-N), [R, 2 * R, cutoff])
    return inner + tail


def density_norm(d, sigma, R):
    n = len(cube_centers(R, sigma))
    return math.sqrt((n * 2.0 / R) ** (d - 1))


G_CASES = [
    (2, 0.25, 256, [0, 0]),
    (2, 0.25, 256, [3.7, -1.2]),
    (2, 0.25, 256, [4, 16]),
    (2, 0.25, 256, [100.5, -60.25]),
    (2, 0.25, 256, [-30, 200]),
    (2, 0.3, 300, [7.5, 12.25]),
    (2, 0.4, 1024, [16, 256]),
    (2, 0.4, 1024, [500, -700]),
    (3, 0.25, 256, [4, 4, 16]),
    (3, 0.25, 256, [10.3, -7.1, 25.9]),
    (3, 0.25, 256, [-60, 80, -100]),
]

LATTICE_CASES = [(2, 0.25, 2.0 ** k) for k in range(8, 14)] + [
    (3, 0.25, 1024.0), (2, 0.4, 4096.0), (2, 0.49, 8192.0)]

WEIGHT_CASES = [(2, 256.0, 100), (3, 128.0, 100), (2, 256.0, 200)]

DENSITY_CASES = [(2, 0.25, 256.0), (3, 0.4, 1024.0), (2, 0.3, 300.0)]


HEADER = """/* Copyright 2026 The decouplab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/"""


def fmt(v):
    return repr(float(v))


def main(out):
    lines = HEADER.splitlines() + [
        "",
        "// Generated by tests/oracles/generate.py. Do not edit.",
        "#pragma once",
        "",
        "#include <array>",
        "",
        "namespace oracle {",
        "",
        "struct GValue {",
        "  int d;",
        "  double sigma;",
        "  double R;",
        "  std::array<double, 3> x;",
        "  double re;",
        "  double im;",
        "};",
        "",
        "inline constexpr GValue kG[] = {",
    ]
    for d, sigma, R, x in G_CASES:
        v = g(d, sigma, R, x)
        xs = ", ".join(fmt(c) for c in (x + [0.0] * (3 - len(x))))
        lines.append(f"    {{{d}, {sigma}, {fmt(R)}, {{{xs}}}, {fmt(v.real)}, {fmt(v.imag)}}},")
    lines += ["};", "", "struct LatticeCount {", "  int d;", "  double sigma;", "  double R;",
              "  long count;", "};", "", "inline constexpr LatticeCount kLattice[] = {"]
    for d, sigma, R in LATTICE_CASES:
        lines.append(f"    {{{d}, {sigma}, {fmt(R)}, {lattice_count(d, sigma, R)}}},")
    lines += ["};", "", "struct WeightIntegral {", "  int d;", "  double R;", "  double power;",
              "  double value;", "};", "", "inline constexpr WeightIntegral kWeight[] = {"]
    for d, R, N in WEIGHT_CASES:
        lines.append(f"    {{{d}, {fmt(R)}, {N}, {fmt(weighted_integral(d, R, N))}}},")
    lines += ["};", "", "struct DensityNorm {", "  int d;", "  double sigma;", "  double R;",
              "  double value;", "};", "", "inline constexpr DensityNorm kDensity[] = {"]
    for d, sigma, R in DENSITY_CASES:
        lines.append(f"    {{{d}, {sigma}, {fmt(R)}, {fmt(density_norm(d, sigma, R))}}},")
    lines += ["};", "", "}  // namespace oracle", ""]
    with open(out, "w") as f:
        f.write("\n".join(lines))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "oracle_values.hpp")
