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

#include "core/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace decouplab {

namespace {

constexpr double kOverlap = 1.0 / 8.0;  // half of the transition width, in cell units

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

// Bump of the cell centered at 0; translates sum to one on R.
double bump(double t) {
  const double rise = smoothstep((t + 0.5 + kOverlap) / (2.0 * kOverlap));
  const double fall = 1.0 - smoothstep((t - 0.5 + kOverlap) / (2.0 * kOverlap));
  return rise * fall;
}

double unitOf(const TubeFrame& f, int j) { return j < f.d - 1 ? f.width : f.length; }

}  // namespace

EvalPlan replan(const CapPiece& piece, const Params& p, double reach) {
  return makePlan(p, *piece.cubes, piece.cap.cubes, reach);
}

std::vector<CapPiece> capDecompose(const Params& p) {
  auto cubes = std::make_shared<const std::vector<FrequencyCube>>(enumerateCubes(p));
  const auto caps = buildCaps(p, *cubes);
  std::vector<CapPiece> pieces;
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (caps[i].empty()) continue;
    CapPiece piece;
    piece.capIndex = i;
    piece.cap = caps[i];
    piece.frame = tubeFrameAt(caps[i].center(), p);
    piece.cubes = cubes;
    piece.plan = makePlan(p, *cubes, caps[i].cubes, p.R);
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

double decompositionRadius(const Params& p) { return p.testRadius(); }

std::vector<WavePacket> packetize(const CapPiece& piece, std::size_t pieceIndex, const Params& p,
                                  std::size_t minSamples) {
  const double rho = decompositionRadius(p);
  const auto plan = replan(piece, p, rho);
  const auto& frame = piece.frame;
  const int d = p.d;

  std::vector<WavePacket> packets;
  for (const auto& anchor : anchorsMeetingBall(frame, rho)) {
    // Tube box clipped to the bounding cube of the ball, in local coordinates.
    std::vector<double> lo(d), hi(d);
    for (int j = 0; j < d; ++j) {
      const double u = unitOf(frame, j);
      lo[j] = std::max(-rho, (anchor[j] - 0.5) * u);
      hi[j] = std::min(rho, (anchor[j] + 0.5) * u);
    }
    PointSet samples(d);
    for (int nc = 4, na = 8, round = 0; round < 8; nc *= 2, na *= 2, ++round) {
      samples = PointSet(d);
      std::vector<int> counts(d, nc);
      counts[d - 1] = na;
      std::vector<int> idx(d, 0);
      std::vector<double> loc(d);
      bool done = false;
      while (!done) {
        for (int j = 0; j < d; ++j) loc[j] = lo[j] + (idx[j] + 0.5) * (hi[j] - lo[j]) / counts[j];
        const auto x = frame.toGlobal(loc);
        if (norm(x) <= rho) samples.push(x);
        int j = d - 1;
        for (; j >= 0; --j) {
          if (++idx[j] < counts[j]) break;
          idx[j] = 0;
        }
        done = j < 0;
      }
      if (samples.size() >= minSamples) break;
    }
    if (samples.empty()) continue;

    const auto values = evaluate(plan, samples);
    double sumSq = 0.0;
    for (const auto& v : values) sumSq += std::norm(v);

    WavePacket wp;
    wp.piece = pieceIndex;
    wp.tube.cap = piece.capIndex;
    wp.tube.anchor = anchor;
    wp.tube.axis = frame.axis;
    wp.tube.dims.assign(d, frame.width);
    wp.tube.dims[d - 1] = frame.length;
    std::vector<double> c(d);
    for (int j = 0; j < d; ++j) c[j] = anchor[j] * unitOf(frame, j);
    wp.tube.center = frame.toGlobal(c);
    wp.magnitude = std::sqrt(sumSq / values.size());
    wp.sampleCount = values.size();
    packets.push_back(std::move(wp));
  }
  markActive(packets, p.activityThreshold);
  return packets;
}

double markActive(std::vector<WavePacket>& packets, double threshold) {
  double top = 0.0;
  for (const auto& wp : packets) top = std::max(top, wp.magnitude);
  for (auto& wp : packets) wp.active = top > 0.0 && wp.magnitude >= threshold * top;
  return top;
}

double comparabilityFactor(std::span<const WavePacket> packets) {
  double lo = INFINITY, hi = 0.0;
  for (const auto& wp : packets) {
    if (!wp.active) continue;
    lo = std::min(lo, wp.magnitude);
    hi = std::max(hi, wp.magnitude);
  }
  return hi > 0.0 ? hi / lo : 1.0;
}

std::vector<std::size_t> dyadicClasses(std::span<const WavePacket> packets) {
  double top = 0.0;
  for (const auto& wp : packets)
    if (wp.active) top = std::max(top, wp.magnitude);
  std::vector<std::size_t> hist;
  for (const auto& wp : packets) {
    if (!wp.active) continue;
    const auto cls = static_cast<std::size_t>(std::floor(std::log2(top / wp.magnitude)));
    if (hist.size() <= cls) hist.resize(cls + 1, 0);
    ++hist[cls];
  }
  return hist;
}

double tubeWeight(const TubeFrame& frame, std::span<const int> anchor, std::span<const double> x) {
  const auto loc = frame.local(x);
  double w = 1.0;
  for (int j = 0; j < frame.d; ++j) w *= bump(loc[j] / unitOf(frame, j) - anchor[j]);
  return w;
}

Complex tubePieceAt(const CapPiece& piece, std::span<const int> anchor,
                    std::span<const double> x) {
  return tubeWeight(piece.frame, anchor, x) * evaluateAt(piece.plan, x);
}

Complex resumTubes(const CapPiece& piece, std::span<const double> x) {
  const auto& frame = piece.frame;
  const int d = frame.d;
  const auto loc = frame.local(x);
  std::vector<int> base(d);
  for (int j = 0; j < d; ++j) base[j] = static_cast<int>(std::lround(loc[j] / unitOf(frame, j)));
  const Complex g = evaluateAt(piece.plan, x);

  Complex total = 0.0;
  std::vector<int> off(d, -1), anchor(d);
  while (true) {
    for (int j = 0; j < d; ++j) anchor[j] = base[j] + off[j];
    const double w = tubeWeight(frame, anchor, x);
    if (w != 0.0) total += w * g;
    int j = d - 1;
    for (; j >= 0; --j) {
      if (++off[j] <= 1) break;
      off[j] = -1;
    }
    if (j < 0) break;
  }
  return total;
}

PacketIndex::PacketIndex(std::size_t pieceCount, std::span<const WavePacket> packets)
    : byPiece_(pieceCount) {
  for (std::size_t i = 0; i < packets.size(); ++i)
    byPiece_.at(packets[i].piece).emplace(packets[i].tube.anchor, i);
}

long PacketIndex::find(std::size_t piece, const std::vector<int>& anchor) const {
  const auto& m = byPiece_.at(piece);
  const auto it = m.find(anchor);
  return it == m.end() ? -1 : static_cast<long>(it->second);
}

long PacketIndex::find(std::size_t piece, const TubeFrame& frame,
                       std::span<const double> x) const {
  return find(piece, frame.anchorOf(x));
}

std::vector<PacketCensus> censusAt(const PointSet& points, std::span<const CapPiece> pieces,
                                   std::span<const WavePacket> packets) {
  const PacketIndex index(pieces.size(), packets);
  std::vector<PacketCensus> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto& c = out[i];
    c.point = i;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const long id = index.find(k, pieces[k].frame, points[i]);
      if (id >= 0 && packets[id].active) {
        ++c.M;
        c.perCap.push_back(k);
      }
    }
  }
  return out;
}

int maxCensus(std::span<const PacketCensus> census) {
  int m = 0;
  for (const auto& c : census) m = std::max(m, c.M);
  return m;
}

std::vector<double> incidenceFractions(const SampledSet& set, std::span<const CapPiece> pieces,
                                       std::span<const WavePacket> packets) {
  const std::size_t cells = set.cellCenters.size();
  require(cells > 0, ErrorKind::Config, "incidence needs a lattice set with unit cells");
  std::vector<std::map<std::vector<int>, std::size_t>> counts(pieces.size());
  for (std::size_t k = 0; k < pieces.size(); ++k)
    for (std::size_t c = 0; c < cells; ++c) ++counts[k][pieces[k].frame.anchorOf(set.cellCenters[c])];

  std::vector<double> out(packets.size(), 0.0);
  for (std::size_t i = 0; i < packets.size(); ++i) {
    const auto& m = counts[packets[i].piece];
    const auto it = m.find(packets[i].tube.anchor);
    if (it != m.end()) out[i] = static_cast<double>(it->second) / cells;
  }
  return out;
}

double orthogonalityRatio(std::span<const CapPiece> pieces, std::span<const EvalPlan> plans,
                          std::span<const double> center, double radius, double spacing) {
  const int d = static_cast<int>(center.size());
  const int n = static_cast<int>(std::ceil(radius / spacing));
  std::vector<int> idx(d, -n);
  std::vector<double> x(d);
  double whole = 0.0, parts = 0.0;
  const double r2 = radius * radius;
  while (true) {
    double s = 0.0;
    for (int j = 0; j < d; ++j) {
      const double o = idx[j] * spacing;
      s += o * o;
      x[j] = center[j] + o;
    }
    if (s <= r2) {
      Complex g = 0.0;
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        const Complex gk = evaluateAt(plans[k], x);
        g += gk;
        parts += std::norm(gk);
      }
      whole += std::norm(g);
    }
    int j = d - 1;
    for (; j >= 0; --j) {
      if (++idx[j] <= n) break;
      idx[j] = -n;
    }
    if (j < 0) break;
  }
  require(parts > 0.0, ErrorKind::Numeric, "cap pieces vanish on the test ball");
  return whole / parts;
}

OrthogonalityReport localOrthogonalityCheck(std::span<const CapPiece> pieces, const Params& p,
                                            int trials, std::uint64_t seed, double spacing) {
  require(!pieces.empty(), ErrorKind::Config, "orthogonality check needs at least one cap");
  require(trials >= 1, ErrorKind::Config, "orthogonality check needs at least one trial");
  const double radius = std::sqrt(p.R);
  const double outer = 0.5 * p.R;
  require(outer > radius, ErrorKind::Config, "R^{1/2}-balls do not fit in B_{R/2}");

  std::vector<EvalPlan> plans;
  for (const auto& piece : pieces) plans.push_back(replan(piece, p, outer));

  Rng rng(seed);
  OrthogonalityReport rep;
  for (int t = 0; t < trials; ++t) {
    const auto c = rng.inBall(p.d, outer - radius);
    rep.ratios.push_back(orthogonalityRatio(pieces, plans, c, radius, spacing));
  }
  std::size_t inBand = 0;
  for (double r : rep.ratios)
    if (r >= 0.25 && r <= 4.0) ++inBand;
  rep.fractionInBand = static_cast<double>(inBand) / rep.ratios.size();
  auto sorted = rep.ratios;
  std::sort(sorted.begin(), sorted.end());
  rep.minRatio = sorted.front();
  rep.maxRatio = sorted.back();
  const std::size_t n = sorted.size();
  rep.medianRatio = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return rep;
}

}  // namespace decouplab
