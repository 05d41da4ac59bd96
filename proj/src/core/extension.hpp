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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "core/geometry.hpp"

namespace decouplab {

using Complex = std::complex<double>;

// Quadrature plan for g(x) = sum over cubes of the integral of
// e(x'.xi + x_d |xi|^2) d xi, e(t) = exp(2 pi i t), restricted to a subset of
// cubes. Node tables are flattened cube-major; xi is stored per coordinate.
struct EvalPlan {
  int d = 0;
  int order = 0;           // Gauss-Legendre nodes per axis per cube
  double reach = 0.0;      // plan is accurate for |x| <= reach
  std::vector<std::size_t> cubeIds;
  std::size_t nodesPerCube = 0;
  std::vector<std::vector<double>> xi;  // [coordinate][node]
  std::vector<double> xiSquared;        // |xi|^2 per node
  std::vector<double> weights;          // per node
  double cubeVolume = 0.0;

  std::size_t nodeCount() const { return weights.size(); }
  // Sum of cube volumes; equals g(0).
  double totalMeasure() const { return cubeVolume * cubeIds.size(); }
};

// Plan over the given cubes (all of them when `subset` is empty). The
// per-axis order is raised above p.quadOrder until the rule resolves the
// phase variation across a cube for every |x| <= reach.
EvalPlan makePlan(const Params& p, const std::vector<FrequencyCube>& cubes,
                  std::span<const std::size_t> subset, double reach);
EvalPlan makePlan(const Params& p, const std::vector<FrequencyCube>& cubes, double reach);

Complex evaluateAt(const EvalPlan& plan, std::span<const double> x);
// Throws Error{Config} for points outside the plan's reach.
std::vector<Complex> evaluate(const EvalPlan& plan, const PointSet& points);

// Midpoint Riemann sum with nodesPerAxis^{d-1} nodes per cube, using libm
// sin/cos. Validation only.
std::vector<Complex> oracleEvaluate(const Params& p, const PointSet& points, int nodesPerAxis,
                                    double nodeBudget = 5e9);

struct AmplitudeStats {
  std::size_t count = 0;
  double normalization = 0.0;  // R^{(d-1)(sigma-1)}
  double minRatio = 0.0;
  double maxRatio = 0.0;
  double medianRatio = 0.0;
  double medianAmplitude = 0.0;  // median |g| at the sampled lattice points
  double constant = 0.0;         // C with ratios in [1/C, C]
  // Fraction of samples where |g| at the lattice point is at least |g| at a
  // random point at distance 1 from it.
  double offsetDominance = 0.0;
};

AmplitudeStats amplitudeAtLatticePoints(const Params& p, std::size_t count, std::uint64_t seed);

}  // namespace decouplab
