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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "core/extension.hpp"
#include "core/geometry.hpp"
#include "core/wavepacket.hpp"

namespace decouplab {

// w_{B_R}: 1 on B_R, (|x|/R)^{-decayPower} outside.
struct WeightedBall {
  double R = 1.0;
  double decayPower = 100.0;
  int radialShells = 64;  // split evenly between [0, R] and [R, cutoff]

  double weight(double r) const;
  // Radius beyond which the weight drops below 1e-12.
  double cutoffRadius() const;
  // Closed-form integral of the weight over R^d, truncated at the cutoff.
  double integral(int d) const;
};

struct NormResult {
  double value = 0.0;
  double p = 0.0;
  std::string set;
  std::size_t sampleCount = 0;
  double estRelError = -1.0;  // negative until a refinement certificate is computed
};

// Fixed-order pairwise summation.
double pairwiseSum(std::span<const double> v);

// (sum_i w_i |v_i|^p)^{1/p} over a sampled set.
NormResult lpNormOnSet(std::span<const Complex> values, const SampledSet& set, double p);

// Polar quadrature on the support of the weight: points and weights that
// already include w_{B_R} and the Jacobian.
struct WeightedQuadrature {
  PointSet points;
  std::vector<double> weights;
};
WeightedQuadrature weightedBallQuadrature(const WeightedBall& ball, int d);

using Field = std::function<std::vector<Complex>(const PointSet&)>;
NormResult lpNormWeighted(const Field& field, int d, double p, const WeightedBall& ball);
NormResult lpNormWeighted(const CapPiece& piece, const Params& params, double p,
                          const WeightedBall& ball);

struct RefinedDecouplingRhs {
  NormResult total;                  // M^{1/2-1/p} (sum_theta ||g_theta||^p)^{1/p}
  std::vector<NormResult> perPiece;  // ||g_theta||_{L^p(w_{B_R})}
};

RefinedDecouplingRhs rhsRefinedDecoupling(std::span<const CapPiece> pieces, const Params& params,
                                          double p, int M, const WeightedBall& ball);
// Same aggregate from precomputed piece norms.
double refinedDecouplingAggregate(std::span<const double> pieceNorms, double p, int M);

// ||h||_{L^2(d omega)} in the graph-projection convention.
double l2DensityNorm(const Params& p);

// Relative change of ||g||_{L^p(set)} when the sample spacing is halved.
// `builder` constructs the set for given parameters (buildX or buildY).
double refinementChange(const Params& params, double p,
                        const std::function<SampledSet(const Params&)>& builder);

}  // namespace decouplab
