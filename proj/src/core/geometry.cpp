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

#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "core/error.hpp"

namespace decouplab {

namespace {

double snapToInteger(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v)) ? r : v;
}

// Calls fn(index) for every integer vector in the box [lo, hi] (inclusive),
// in lexicographic order.
template <typename Fn>
void forEachIndex(const std::vector<int>& lo, const std::vector<int>& hi, Fn&& fn) {
  const std::size_t n = lo.size();
  for (std::size_t j = 0; j < n; ++j)
    if (lo[j] > hi[j]) return;
  std::vector<int> idx = lo;
  while (true) {
    fn(idx);
    std::size_t j = n;
    while (j > 0) {
      --j;
      if (idx[j] < hi[j]) {
        ++idx[j];
        break;
      }
      idx[j] = lo[j];
      if (j == 0) return;
    }
    if (n == 0) return;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void Params::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorKind::Config, msg); };
  if (d < 2) bad("invariant violated: d >= 2 (got " + std::to_string(d) + ")");
  if (!(sigma > 0.0 && sigma < 0.5)) {
    std::ostringstream os;
    os << "invariant violated: 0 < sigma < 1/2 (got sigma = " << sigma << ")";
    bad(os.str());
  }
  if (!(R > 1.0) || !std::isfinite(R)) {
    std::ostringstream os;
    os << "invariant violated: R > 1 (got R = " << R << ")";
    bad(os.str());
  }
  if (!(cd > 0.0 && cd <= 1.0)) bad("invariant violated: cd in (0, 1]");
  if (quadOrder < 2) bad("invariant violated: quadOrder >= 2");
  if (!(sampleSpacing > 0.0 && sampleSpacing <= 1.0))
    bad("invariant violated: sampleSpacing in (0, 1]");
  if (!(epsSlack >= 0.0)) bad("invariant violated: epsSlack >= 0");
  if (!(activityThreshold > 0.0 && activityThreshold <= 1.0))
    bad("invariant violated: activityThreshold in (0, 1]");
  if (!(decayPower > d)) bad("invariant violated: decayPower > d");
}

double Params::latticeScale() const { return snapToInteger(std::pow(R, sigma)); }

int Params::cubesPerAxis() const {
  const double s = latticeScale();
  // l < s with l integer.
  return static_cast<int>(std::ceil(s)) - 1;
}

double Params::capSide() const { return 1.0 / snapToInteger(std::sqrt(R)); }

double Params::tubeWidth() const { return snapToInteger(std::sqrt(R)); }

void PointSet::push(std::span<const double> x) {
  coords_.insert(coords_.end(), x.begin(), x.end());
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

std::vector<double> Cap::center() const {
  std::vector<double> c(lower.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = lower[j] + 0.5 * side;
  return c;
}

std::vector<double> TubeFrame::local(std::span<const double> x) const {
  std::vector<double> out(d);
  for (int j = 0; j < d - 1; ++j) out[j] = dot(cross[j], x);
  out[d - 1] = dot(axis, x);
  return out;
}

std::vector<double> TubeFrame::toGlobal(std::span<const double> loc) const {
  std::vector<double> x(d, 0.0);
  for (int i = 0; i < d; ++i) {
    double s = loc[d - 1] * axis[i];
    for (int j = 0; j < d - 1; ++j) s += loc[j] * cross[j][i];
    x[i] = s;
  }
  return x;
}

std::vector<int> TubeFrame::anchorOf(std::span<const double> x) const {
  const auto loc = local(x);
  std::vector<int> a(d);
  for (int j = 0; j < d; ++j) {
    const double unit = j < d - 1 ? width : length;
    a[j] = static_cast<int>(std::ceil(loc[j] / unit - 0.5));
  }
  return a;
}

double TubeFrame::distanceSquaredToOrigin(std::span<const int> anchor) const {
  double s = 0.0;
  for (int j = 0; j < d; ++j) {
    const double unit = j < d - 1 ? width : length;
    const double lo = (anchor[j] - 0.5) * unit;
    const double hi = (anchor[j] + 0.5) * unit;
    const double gap = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
    s += gap * gap;
  }
  return s;
}

std::string toString(SetKind kind) {
  switch (kind) {
    case SetKind::XLattice: return "X-lattice";
    case SetKind::YFractal: return "Y-fractal";
    case SetKind::Ball: return "ball";
    case SetKind::Custom: return "custom";
  }
  return "custom";
}

double SampledSet::totalWeight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

std::vector<FrequencyCube> enumerateCubes(const Params& p) {
  p.validate();
  const double scale = p.latticeScale();
  if (!(scale > 2.0))
    fail(ErrorKind::Config,
         "R^sigma <= 2 leaves at most one lattice frequency per axis; increase R or sigma");
  const int n = p.cubesPerAxis();
  const int k = p.freqDim();
  const double h = p.cubeHalfWidth();
  require(1.0 / scale > 2.0 * h, ErrorKind::Config,
          "frequency cubes overlap: R^{-sigma} <= 2/R");
  require(n / scale + h < 1.0, ErrorKind::Config,
          "outermost frequency cube leaves (0,1)^{d-1}; choose R so that R^sigma is "
          "not just above an integer");

  std::vector<FrequencyCube> cubes;
  forEachIndex(std::vector<int>(k, 1), std::vector<int>(k, n), [&](const std::vector<int>& l) {
    FrequencyCube c;
    c.index = l;
    c.center.resize(k);
    for (int j = 0; j < k; ++j) c.center[j] = l[j] / scale;
    c.halfWidth = h;
    cubes.push_back(std::move(c));
  });
  return cubes;
}

std::vector<Cap> buildCaps(const Params& p, const std::vector<FrequencyCube>& cubes) {
  p.validate();
  const int k = p.freqDim();
  const double side = p.capSide();
  const int perAxis = static_cast<int>(std::ceil(1.0 / side - 1e-9));

  std::vector<Cap> caps;
  forEachIndex(std::vector<int>(k, 0), std::vector<int>(k, perAxis - 1),
               [&](const std::vector<int>& idx) {
                 Cap c;
                 c.index = idx;
                 c.side = side;
                 c.lower.resize(k);
                 for (int j = 0; j < k; ++j) c.lower[j] = idx[j] * side;
                 caps.push_back(std::move(c));
               });

  for (std::size_t i = 0; i < cubes.size(); ++i) {
    std::size_t flat = 0;
    for (int j = 0; j < k; ++j) {
      int cell = static_cast<int>(std::floor(cubes[i].center[j] / side));
      cell = std::clamp(cell, 0, perAxis - 1);
      flat = flat * perAxis + cell;
    }
    caps[flat].cubes.push_back(i);
  }
  return caps;
}

TubeFrame tubeFrameAt(std::span<const double> capCenter, const Params& p) {
  const int d = p.d;
  TubeFrame f;
  f.d = d;
  f.width = p.tubeWidth();
  f.length = p.tubeLength();
  f.axis.assign(d, 0.0);
  for (int j = 0; j < d - 1; ++j) f.axis[j] = -2.0 * capCenter[j];
  f.axis[d - 1] = 1.0;
  const double n = norm(f.axis);
  for (auto& a : f.axis) a /= n;

  // Gram-Schmidt on e_1..e_{d-1}; independent of the axis since axis_d > 0.
  for (int j = 0; j < d - 1; ++j) {
    std::vector<double> v(d, 0.0);
    v[j] = 1.0;
    auto project_out = [&](const std::vector<double>& u) {
      const double c = dot(v, u);
      for (int i = 0; i < d; ++i) v[i] -= c * u[i];
    };
    project_out(f.axis);
    for (const auto& u : f.cross) project_out(u);
    const double vn = norm(v);
    for (auto& x : v) x /= vn;
    f.cross.push_back(std::move(v));
  }
  return f;
}

std::vector<std::vector<int>> anchorsMeetingBall(const TubeFrame& frame, double radius) {
  const int d = frame.d;
  std::vector<int> lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    const double unit = j < d - 1 ? frame.width : frame.length;
    const int k = static_cast<int>(std::ceil(radius / unit + 0.5));
    lo[j] = -k;
    hi[j] = k;
  }
  std::vector<std::vector<int>> out;
  const double r2 = radius * radius;
  forEachIndex(lo, hi, [&](const std::vector<int>& a) {
    if (frame.distanceSquaredToOrigin(a) < r2) out.push_back(a);
  });
  return out;
}

std::vector<Tube> buildTubes(const Cap& cap, std::size_t capIndex, const Params& p) {
  const auto frame = tubeFrameAt(cap.center(), p);
  std::vector<Tube> tubes;
  for (auto& a : anchorsMeetingBall(frame, p.R)) {
    Tube t;
    t.cap = capIndex;
    t.axis = frame.axis;
    t.dims.assign(p.d, frame.width);
    t.dims[p.d - 1] = frame.length;
    std::vector<double> loc(p.d);
    for (int j = 0; j < p.d; ++j) loc[j] = a[j] * t.dims[j];
    t.center = frame.toGlobal(loc);
    t.anchor = std::move(a);
    tubes.push_back(std::move(t));
  }
  return tubes;
}

PointSet latticePoints(const Params& p) {
  p.validate();
  const int d = p.d;
  const double s1 = p.latticeScale();
  const double s2 = s1 * s1;
  const double radius = p.testRadius();
  const double margin = 0.5 * std::sqrt(static_cast<double>(d));

  std::vector<int> lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    const double step = j < d - 1 ? s1 : s2;
    const int k = static_cast<int>(std::floor(radius / step));
    lo[j] = -k;
    hi[j] = k;
  }
  PointSet pts(d);
  std::vector<double> x(d);
  forEachIndex(lo, hi, [&](const std::vector<int>& n) {
    for (int j = 0; j < d; ++j) x[j] = n[j] * (j < d - 1 ? s1 : s2);
    if (norm(x) + margin <= radius) pts.push(x);
  });
  return pts;
}

namespace {

SampledSet sampleUnitCubes(const Params& p, PointSet centers, SetKind kind) {
  if (centers.empty())
    fail(ErrorKind::Config,
         "no lattice point fits in B_{cd R}: R is too small for the chosen cd");
  const int d = p.d;
  const int m = std::max(1, static_cast<int>(std::lround(1.0 / p.sampleSpacing)));
  const double w = std::pow(1.0 / m, d);
  std::vector<double> offsets(m);
  for (int i = 0; i < m; ++i) offsets[i] = (i + 0.5) / m - 0.5;

  SampledSet set;
  set.kind = kind;
  set.points = PointSet(d);
  std::size_t perCell = 1;
  for (int j = 0; j < d; ++j) perCell *= m;
  set.points.reserve(centers.size() * perCell);
  set.weights.reserve(centers.size() * perCell);
  set.cellOf.reserve(centers.size() * perCell);

  std::vector<double> x(d);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const auto ctr = centers[c];
    forEachIndex(std::vector<int>(d, 0), std::vector<int>(d, m - 1),
                 [&](const std::vector<int>& idx) {
                   for (int j = 0; j < d; ++j) x[j] = ctr[j] + offsets[idx[j]];
                   set.points.push(x);
                   set.weights.push_back(w);
                   set.cellOf.push_back(c);
                 });
  }
  set.cellCenters = std::move(centers);
  set.cellVolume = 1.0;
  return set;
}

}  // namespace

SampledSet buildX(const Params& p) {
  return sampleUnitCubes(p, latticePoints(p), SetKind::XLattice);
}

double fractalExponent(const Params& p) { return p.d - (p.d + 1) * p.sigma; }

SampledSet buildY(const Params& p) {
  auto set = sampleUnitCubes(p, latticePoints(p), SetKind::YFractal);
  set.alpha = fractalExponent(p);
  return set;
}

double fractalConstant(const SampledSet& y, std::span<const double> radii,
                       const PointSet& centers) {
  require(y.alpha.has_value(), ErrorKind::Config, "fractal constant needs a set with alpha");
  const double alpha = *y.alpha;
  const std::size_t n = y.points.size();
  std::vector<double> dist(n);
  double worst = 0.0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const auto ctr = centers[c];
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = y.points[i];
      double s = 0.0;
      for (int j = 0; j < y.points.dim(); ++j) s += (x[j] - ctr[j]) * (x[j] - ctr[j]);
      dist[i] = std::sqrt(s);
    }
    for (double r : radii) {
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (dist[i] <= r) mass += y.weights[i];
      worst = std::max(worst, mass / std::pow(r, alpha));
    }
  }
  return worst;
}

}  // namespace decouplab
