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

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "core/extension.hpp"
#include "core/geometry.hpp"

namespace decouplab {

// g_theta: the part of g with frequencies in one nonempty cap.
struct CapPiece {
  std::size_t capIndex = 0;  // position in the full cap list
  Cap cap;
  TubeFrame frame;
  std::shared_ptr<const std::vector<FrequencyCube>> cubes;
  EvalPlan plan;  // reach R
};

EvalPlan replan(const CapPiece& piece, const Params& p, double reach);

std::vector<CapPiece> capDecompose(const Params& p);

struct WavePacket {
  Tube tube;
  std::size_t piece = 0;      // position in the CapPiece list
  double magnitude = 0.0;     // RMS of |g_theta| over interior tube samples
  std::size_t sampleCount = 0;
  bool active = false;
};

// Radius of the ball in which g is decomposed into wave packets; X and Y live
// inside it.
double decompositionRadius(const Params& p);

// One packet per tube of the piece's tiling meeting the decomposition ball.
// Activity is set relative to the largest magnitude within this piece; use
// markActive over the whole population for the global rule.
std::vector<WavePacket> packetize(const CapPiece& piece, std::size_t pieceIndex, const Params& p,
                                  std::size_t minSamples = 32);

// Marks packets with magnitude >= threshold * max magnitude as active and
// returns that max.
double markActive(std::vector<WavePacket>& packets, double threshold);

// max/min magnitude over active packets (1 when there are none).
double comparabilityFactor(std::span<const WavePacket> packets);

// Histogram of active packets by dyadic class floor(log2(max / magnitude)).
std::vector<std::size_t> dyadicClasses(std::span<const WavePacket> packets);

// Smooth partition of unity subordinate to the tube tiling: C^2 bumps that
// overlap by a quarter of the cell size across each cell face.
double tubeWeight(const TubeFrame& frame, std::span<const int> anchor, std::span<const double> x);
// g_{theta,T}(x) = tubeWeight * g_theta(x).
Complex tubePieceAt(const CapPiece& piece, std::span<const int> anchor, std::span<const double> x);
// Sum of g_{theta,T}(x) over every tube whose bump is nonzero at x.
Complex resumTubes(const CapPiece& piece, std::span<const double> x);

// Lookup of packets by (piece, anchor).
class PacketIndex {
 public:
  PacketIndex(std::size_t pieceCount, std::span<const WavePacket> packets);
  // Packet id of the tube of `piece` containing x, or -1.
  long find(std::size_t piece, const TubeFrame& frame, std::span<const double> x) const;
  long find(std::size_t piece, const std::vector<int>& anchor) const;

 private:
  std::vector<std::map<std::vector<int>, std::size_t>> byPiece_;
};

struct PacketCensus {
  std::size_t point = 0;
  int M = 0;
  std::vector<std::size_t> perCap;  // pieces contributing an active packet
};

std::vector<PacketCensus> censusAt(const PointSet& points, std::span<const CapPiece> pieces,
                                   std::span<const WavePacket> packets);
int maxCensus(std::span<const PacketCensus> census);

// For each packet, the fraction of unit cells of `set` whose center lies in
// its tube.
std::vector<double> incidenceFractions(const SampledSet& set, std::span<const CapPiece> pieces,
                                       std::span<const WavePacket> packets);

// int_B |g|^2 / sum_theta int_B |g_theta|^2 on the ball B(center, radius),
// integrated on a cubic grid of the given spacing.
double orthogonalityRatio(std::span<const CapPiece> pieces, std::span<const EvalPlan> plans,
                          std::span<const double> center, double radius, double spacing);

struct OrthogonalityReport {
  std::vector<double> ratios;
  double fractionInBand = 0.0;  // fraction of ratios in [1/4, 4]
  double minRatio = 0.0;
  double maxRatio = 0.0;
  double medianRatio = 0.0;
};

// Ratios over `trials` random R^{1/2}-balls contained in B_{R/2}.
OrthogonalityReport localOrthogonalityCheck(std::span<const CapPiece> pieces, const Params& p,
                                            int trials, std::uint64_t seed, double spacing = 0.5);

}  // namespace decouplab
