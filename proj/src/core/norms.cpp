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

#include "core/norms.hpp"

#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/quadrature.hpp"

namespace decouplab {

namespace {

double unitBallVolume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double pairwiseSumImpl(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwiseSumImpl(v, half) + pairwiseSumImpl(v + half, n - half);
}

// Angular quadrature on S^{d-1} in hyperspherical coordinates.
struct SphereRule {
  std::vector<std::vector<double>> dirs;
  std::vector<double> weights;
};

SphereRule sphereRule(int d) {
  const int azimuth = d == 2 ? 128 : (d == 3 ? 48 : 24);
  const int polar = d == 3 ? 24 : 12;
  SphereRule rule;
  const auto gl = gaussLegendre(polar);

  // Polar angles theta_1..theta_{d-2} in [0, pi], azimuth phi in [0, 2 pi).
  const int nPolar = d - 2;
  std::vector<int> idx(nPolar, 0);
  while (true) {
    double w = 1.0;
    std::vector<double> sines(nPolar), cosines(nPolar);
    for (int k = 0; k < nPolar; ++k) {
      const double theta = 0.5 * std::numbers::pi * (gl.nodes[idx[k]] + 1.0);
      sines[k] = std::sin(theta);
      cosines[k] = std::cos(theta);
      w *= 0.5 * std::numbers::pi * gl.weights[idx[k]] * std::pow(sines[k], d - 2 - k);
    }
    for (int a = 0; a < azimuth; ++a) {
      const double phi = 2.0 * std::numbers::pi * (a + 0.5) / azimuth;
      std::vector<double> dir(d);
      double prod = 1.0;
      for (int k = 0; k < nPolar; ++k) {
        dir[k] = prod * cosines[k];
        prod *= sines[k];
      }
      dir[d - 2] = prod * std::cos(phi);
      dir[d - 1] = prod * std::sin(phi);
      // The time axis is last in space-time; it plays no special role here.
      rule.dirs.push_back(std::move(dir));
      rule.weights.push_back(w * 2.0 * std::numbers::pi / azimuth);
    }
    int k = nPolar - 1;
    for (; k >= 0; --k) {
      if (++idx[k] < polar) break;
      idx[k] = 0;
    }
    if (k < 0) break;
  }
  return rule;
}

}  // namespace

double WeightedBall::weight(double r) const {
  return r <= R ? 1.0 : std::pow(r / R, -decayPower);
}

double WeightedBall::cutoffRadius() const { return R * std::pow(10.0, 12.0 / decayPower); }

double WeightedBall::integral(int d) const {
  // |S^{d-1}| = d |B_1|.
  const double sphere = d * unitBallVolume(d);
  const double inner = unitBallVolume(d) * std::pow(R, d);
  const double k = decayPower - d;
  const double tail = sphere * std::pow(R, d) * (1.0 - std::pow(cutoffRadius() / R, -k)) / k;
  return inner + tail;
}

double pairwiseSum(std::span<const double> v) { return pairwiseSumImpl(v.data(), v.size()); }

NormResult lpNormOnSet(std::span<const Complex> values, const SampledSet& set, double p) {
  require(p >= 1.0, ErrorKind::Config, "L^p norm needs p >= 1");
  require(!set.weights.empty(), ErrorKind::Config, "L^p norm over an empty set");
  require(values.size() == set.weights.size(), ErrorKind::Config,
          "field samples do not match the sampled set");
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    terms[i] = set.weights[i] * std::pow(std::abs(values[i]), p);
  NormResult r;
  r.value = std::pow(pairwiseSum(terms), 1.0 / p);
  r.p = p;
  r.set = toString(set.kind);
  r.sampleCount = values.size();
  require(std::isfinite(r.value), ErrorKind::Numeric, "non-finite L^p norm");
  return r;
}

WeightedQuadrature weightedBallQuadrature(const WeightedBall& ball, int d) {
  const int half = ball.radialShells / 2;
  const auto gl = gaussLegendre(half);
  const auto sphere = sphereRule(d);
  const double cutoff = ball.cutoffRadius();

  WeightedQuadrature q;
  q.points = PointSet(d);
  std::vector<double> x(d);
  for (int part = 0; part < 2; ++part) {
    const double a = part == 0 ? 0.0 : ball.R;
    const double b = part == 0 ? ball.R : cutoff;
    for (int i = 0; i < half; ++i) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i];
      const double radial = 0.5 * (b - a) * gl.weights[i] * std::pow(r, d - 1) * ball.weight(r);
      for (std::size_t s = 0; s < sphere.dirs.size(); ++s) {
        for (int j = 0; j < d; ++j) x[j] = r * sphere.dirs[s][j];
        q.points.push(x);
        q.weights.push_back(radial * sphere.weights[s]);
      }
    }
  }
  return q;
}

NormResult lpNormWeighted(const Field& field, int d, double p, const WeightedBall& ball) {
  require(p >= 1.0, ErrorKind::Config, "L^p norm needs p >= 1");
  const auto q = weightedBallQuadrature(ball, d);
  const auto values = field(q.points);
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    terms[i] = q.weights[i] * std::pow(std::abs(values[i]), p);
  NormResult r;
  r.value = std::pow(pairwiseSum(terms), 1.0 / p);
  r.p = p;
  r.set = "w_B_R";
  r.sampleCount = values.size();
  require(std::isfinite(r.value), ErrorKind::Numeric, "non-finite weighted norm");
  return r;
}

NormResult lpNormWeighted(const CapPiece& piece, const Params& params, double p,
                          const WeightedBall& ball) {
  const auto plan = replan(piece, params, ball.cutoffRadius());
  return lpNormWeighted([&](const PointSet& pts) { return evaluate(plan, pts); }, params.d, p,
                        ball);
}

double refinedDecouplingAggregate(std::span<const double> pieceNorms, double p, int M) {
  require(M >= 1, ErrorKind::Config, "refined decoupling needs M >= 1");
  std::vector<double> powers(pieceNorms.size());
  for (std::size_t i = 0; i < pieceNorms.size(); ++i) powers[i] = std::pow(pieceNorms[i], p);
  return std::pow(static_cast<double>(M), 0.5 - 1.0 / p) * std::pow(pairwiseSum(powers), 1.0 / p);
}

RefinedDecouplingRhs rhsRefinedDecoupling(std::span<const CapPiece> pieces, const Params& params,
                                          double p, int M, const WeightedBall& ball) {
  RefinedDecouplingRhs out;
  std::vector<double> norms;
  std::size_t samples = 0;
  for (const auto& piece : pieces) {
    out.perPiece.push_back(lpNormWeighted(piece, params, p, ball));
    norms.push_back(out.perPiece.back().value);
    samples += out.perPiece.back().sampleCount;
  }
  out.total.value = refinedDecouplingAggregate(norms, p, M);
  out.total.p = p;
  out.total.set = "w_B_R";
  out.total.sampleCount = samples;
  return out;
}

double l2DensityNorm(const Params& p) {
  p.validate();
  const int k = p.freqDim();
  const double count = std::pow(static_cast<double>(p.cubesPerAxis()), k);
  return std::sqrt(count * std::pow(2.0 * p.cubeHalfWidth(), k));
}

double refinementChange(const Params& params, double p,
                        const std::function<SampledSet(const Params&)>& builder) {
  auto fine = params;
  fine.sampleSpacing = 0.5 * params.sampleSpacing;
  const auto cubes = enumerateCubes(params);
  const double reach = params.testRadius();
  const auto plan = makePlan(params, cubes, reach);
  const auto coarseSet = builder(params);
  const auto fineSet = builder(fine);
  const double a = lpNormOnSet(evaluate(plan, coarseSet.points), coarseSet, p).value;
  const double b = lpNormOnSet(evaluate(plan, fineSet.points), fineSet, p).value;
  return std::abs(a - b) / b;
}

}  // namespace decouplab
