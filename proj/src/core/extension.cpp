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

#include "core/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "core/error.hpp"
#include "core/phase_kernel.hpp"
#include "core/quadrature.hpp"
#include "core/rng.hpp"

namespace decouplab {

namespace {

constexpr std::size_t kBlock = 256;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

EvalPlan makePlan(const Params& p, const std::vector<FrequencyCube>& cubes,
                  std::span<const std::size_t> subset, double reach) {
  p.validate();
  require(reach > 0.0, ErrorKind::Config, "plan reach must be positive");
  const int k = p.freqDim();
  const double h = p.cubeHalfWidth();

  EvalPlan plan;
  plan.d = p.d;
  plan.reach = reach;
  if (subset.empty()) {
    plan.cubeIds.resize(cubes.size());
    std::iota(plan.cubeIds.begin(), plan.cubeIds.end(), std::size_t{0});
  } else {
    plan.cubeIds.assign(subset.begin(), subset.end());
  }

  // Across a cube the phase deviates from its center value by
  // sum_j (x_j + 2 xi_j x_d) delta_j + x_d |delta|^2, |delta_j| <= h.
  double xiMax = 0.0;
  for (auto id : plan.cubeIds)
    for (double c : cubes[id].center) xiMax = std::max(xiMax, c + h);
  const double bandwidth =
      2.0 * std::numbers::pi * reach * h * std::sqrt(1.0 + 4.0 * xiMax * xiMax) + 2.0 * std::numbers::pi * reach * h * h;
  plan.order = gaussOrderForBandwidth(bandwidth, p.quadOrder);

  const auto rule = gaussLegendre(plan.order);
  std::size_t perCube = 1;
  for (int j = 0; j < k; ++j) perCube *= plan.order;
  plan.nodesPerCube = perCube;
  plan.cubeVolume = std::pow(2.0 * h, k);

  const std::size_t total = perCube * plan.cubeIds.size();
  plan.xi.assign(k, std::vector<double>(total));
  plan.xiSquared.resize(total);
  plan.weights.resize(total);

  std::vector<int> idx(k);
  std::size_t node = 0;
  for (auto id : plan.cubeIds) {
    const auto& cube = cubes[id];
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t n = 0; n < perCube; ++n) {
      double w = 1.0, sq = 0.0;
      for (int j = 0; j < k; ++j) {
        const double xi = cube.center[j] + h * rule.nodes[idx[j]];
        plan.xi[j][node] = xi;
        sq += xi * xi;
        w *= h * rule.weights[idx[j]];
      }
      plan.xiSquared[node] = sq;
      plan.weights[node] = w;
      ++node;
      for (int j = k - 1; j >= 0; --j) {
        if (++idx[j] < plan.order) break;
        idx[j] = 0;
      }
    }
  }
  return plan;
}

EvalPlan makePlan(const Params& p, const std::vector<FrequencyCube>& cubes, double reach) {
  return makePlan(p, cubes, {}, reach);
}

Complex evaluateAt(const EvalPlan& plan, std::span<const double> x) {
  const int k = plan.d - 1;
  const double xd = x[k];
  const std::size_t n = plan.nodeCount();
  double phase[kBlock];
  double re = 0.0, im = 0.0;
  for (std::size_t base = 0; base < n; base += kBlock) {
    const std::size_t len = std::min(kBlock, n - base);
    const double* sq = plan.xiSquared.data() + base;
    for (std::size_t i = 0; i < len; ++i) phase[i] = xd * sq[i];
    for (int j = 0; j < k; ++j) {
      const double xj = x[j];
      const double* xi = plan.xi[j].data() + base;
      for (std::size_t i = 0; i < len; ++i) phase[i] += xj * xi[i];
    }
    const double* w = plan.weights.data() + base;
    double bre = 0.0, bim = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      double c, s;
      kernel::sincos2pi(phase[i], c, s);
      bre += w[i] * c;
      bim += w[i] * s;
    }
    re += bre;
    im += bim;
  }
  return {re, im};
}

std::vector<Complex> evaluate(const EvalPlan& plan, const PointSet& points) {
  require(points.dim() == plan.d, ErrorKind::Config, "point dimension does not match plan");
  const double limit = plan.reach * (1.0 + 1e-12);
  std::vector<Complex> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto x = points[i];
    if (norm(x) > limit) {
      std::ostringstream os;
      os << "evaluation point at |x| = " << norm(x) << " outside plan reach " << plan.reach;
      fail(ErrorKind::Config, os.str());
    }
    out[i] = evaluateAt(plan, x);
  }
  return out;
}

std::vector<Complex> oracleEvaluate(const Params& p, const PointSet& points, int nodesPerAxis,
                                    double nodeBudget) {
  require(nodesPerAxis >= 100, ErrorKind::Config, "oracle needs at least 100 nodes per axis");
  const auto cubes = enumerateCubes(p);
  const int k = p.freqDim();
  const double perCube = std::pow(static_cast<double>(nodesPerAxis), k);
  const double total = perCube * cubes.size() * points.size();
  if (total > nodeBudget) {
    std::ostringstream os;
    os << "oracle would evaluate " << total << " nodes, budget is " << nodeBudget;
    fail(ErrorKind::Budget, os.str());
  }

  const double h = p.cubeHalfWidth();
  const double step = 2.0 * h / nodesPerAxis;
  const double w = std::pow(step, k);
  std::vector<Complex> out(points.size());
  std::vector<int> idx(k);
  std::vector<double> xi(k);
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const auto x = points[pi];
    double re = 0.0, im = 0.0;
    for (const auto& cube : cubes) {
      std::fill(idx.begin(), idx.end(), 0);
      double cre = 0.0, cim = 0.0;
      for (std::size_t n = 0; n < static_cast<std::size_t>(perCube); ++n) {
        double ph = 0.0, sq = 0.0;
        for (int j = 0; j < k; ++j) {
          xi[j] = cube.center[j] - h + (idx[j] + 0.5) * step;
          ph += x[j] * xi[j];
          sq += xi[j] * xi[j];
        }
        ph += x[k] * sq;
        const double arg = 2.0 * std::numbers::pi * (ph - std::floor(ph));
        cre += std::cos(arg);
        cim += std::sin(arg);
        for (int j = k - 1; j >= 0; --j) {
          if (++idx[j] < nodesPerAxis) break;
          idx[j] = 0;
        }
      }
      re += w * cre;
      im += w * cim;
    }
    out[pi] = {re, im};
  }
  return out;
}

AmplitudeStats amplitudeAtLatticePoints(const Params& p, std::size_t count, std::uint64_t seed) {
  require(count >= 1, ErrorKind::Config, "amplitude check needs at least one lattice point");
  const auto lattice = latticePoints(p);
  if (lattice.empty())
    fail(ErrorKind::Config, "no lattice point fits in B_{cd R}: R is too small for the chosen cd");
  const auto cubes = enumerateCubes(p);
  const auto plan = makePlan(p, cubes, p.testRadius() + 1.0);

  Rng rng(seed);
  const auto chosen = rng.sample(lattice.size(), count);
  PointSet at(p.d), off(p.d);
  for (auto i : chosen) {
    const auto x = lattice[i];
    at.push(x);
    auto u = rng.unitVector(p.d);
    for (int j = 0; j < p.d; ++j) u[j] += x[j];
    off.push(u);
  }
  const auto gAt = evaluate(plan, at);
  const auto gOff = evaluate(plan, off);

  AmplitudeStats st;
  st.count = chosen.size();
  st.normalization = std::pow(p.R, (p.d - 1) * (p.sigma - 1.0));
  std::vector<double> ratios, amps;
  std::size_t dominant = 0;
  for (std::size_t i = 0; i < gAt.size(); ++i) {
    amps.push_back(std::abs(gAt[i]));
    ratios.push_back(amps.back() / st.normalization);
    if (std::abs(gAt[i]) >= std::abs(gOff[i])) ++dominant;
  }
  st.minRatio = *std::min_element(ratios.begin(), ratios.end());
  st.maxRatio = *std::max_element(ratios.begin(), ratios.end());
  st.medianRatio = median(ratios);
  st.medianAmplitude = median(amps);
  st.constant = std::max(st.maxRatio, 1.0 / st.minRatio);
  st.offsetDominance = static_cast<double>(dominant) / gAt.size();
  return st;
}

}  // namespace decouplab
