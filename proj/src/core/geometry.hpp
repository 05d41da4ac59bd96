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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace decouplab {

// Experiment configuration for a single scale R.
struct Params {
  int d = 2;                  // ambient dimension (space-time)
  double sigma = 0.25;        // lattice exponent, 0 < sigma < 1/2
  double R = 256.0;           // scale
  double cd = 0.125;          // the example lives in B_{cd R}
  int quadOrder = 8;          // minimum Gauss-Legendre order per axis per cube
  double sampleSpacing = 0.5; // spatial step for unit-scale sets
  double epsSlack = 0.05;     // sub-polynomial slack on exponent checks
  double activityThreshold = 1.0 / 16.0;
  double decayPower = 100.0;  // tail power of w_{B_R}

  // Throws Error{Config} naming the violated invariant.
  void validate() const;

  int freqDim() const { return d - 1; }
  // R^sigma, snapped to the nearest integer when within 1e-9 relative of it.
  double latticeScale() const;
  // Number of admissible l_j per axis: #{l in Z : 1 <= l < R^sigma}.
  int cubesPerAxis() const;
  double cubeHalfWidth() const { return 1.0 / R; }
  double capSide() const;
  double tubeWidth() const;
  double tubeLength() const { return R; }
  // Radius of the ball on which the example is coherent and X, Y live.
  double testRadius() const { return cd * R; }
};

// Flat storage of points in R^dim.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }

  void push(std::span<const double> x);
  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> flat() const { return coords_; }
  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

double norm(std::span<const double> x);

// One (d-1)-cube of side 2/R centered at l R^{-sigma}.
struct FrequencyCube {
  std::vector<int> index;      // l, entries in [1, R^sigma)
  std::vector<double> center;  // l * R^{-sigma}
  double halfWidth = 0.0;
};

// Paraboloid cap whose projection is a square of side R^{-1/2}.
struct Cap {
  std::vector<int> index;
  std::vector<double> lower;  // base square [lower, lower + side)
  double side = 0.0;
  std::vector<std::size_t> cubes;  // indices into the cube list

  std::vector<double> center() const;
  bool empty() const { return cubes.empty(); }
};

// Orthonormal frame of the tube family dual to a cap: cross directions of
// width R^{1/2} and the long axis of length R along the paraboloid normal.
struct TubeFrame {
  int d = 0;
  std::vector<double> axis;                // unit normal (-2 xi_c, 1)/|.|
  std::vector<std::vector<double>> cross;  // d-1 unit vectors orthogonal to axis
  double width = 0.0;
  double length = 0.0;

  // Local coordinates (cross..., along) of x.
  std::vector<double> local(std::span<const double> x) const;
  std::vector<double> toGlobal(std::span<const double> local) const;
  // Anchor of the tube containing x. Cells are (k - 1/2, k + 1/2] in units of
  // width/length, so boundary points go to the lexicographically smaller tube.
  std::vector<int> anchorOf(std::span<const double> x) const;
  // Squared distance from the origin to the closed tube box.
  double distanceSquaredToOrigin(std::span<const int> anchor) const;
};

struct Tube {
  std::size_t cap = 0;       // index into the cap list
  std::vector<int> anchor;   // (k_1..k_{d-1}, m)
  std::vector<double> axis;
  std::vector<double> dims;  // width x ... x width x length
  std::vector<double> center;
};

enum class SetKind { XLattice, YFractal, Ball, Custom };
std::string toString(SetKind kind);

// Finite quadrature representation of a subset of R^d.
struct SampledSet {
  PointSet points;
  std::vector<double> weights;
  SetKind kind = SetKind::Custom;
  std::optional<double> alpha;  // fractal exponent, Y only

  // Unit-cube structure for lattice sets: cube centers and, per sample, the
  // cube it belongs to.
  PointSet cellCenters;
  std::vector<std::size_t> cellOf;
  double cellVolume = 1.0;

  double totalWeight() const;
  double closedFormMeasure() const { return cellCenters.size() * cellVolume; }
};

std::vector<FrequencyCube> enumerateCubes(const Params& p);
std::vector<Cap> buildCaps(const Params& p, const std::vector<FrequencyCube>& cubes);

TubeFrame tubeFrameAt(std::span<const double> capCenter, const Params& p);
// Tubes of the tiling of B_R attached to one cap.
std::vector<Tube> buildTubes(const Cap& cap, std::size_t capIndex, const Params& p);
// Tubes of a frame whose box meets the closed ball B_radius.
std::vector<std::vector<int>> anchorsMeetingBall(const TubeFrame& frame, double radius);

// Points (n' R^sigma, n_d R^{2 sigma}) whose unit cube lies inside B_{cd R}.
PointSet latticePoints(const Params& p);
SampledSet buildX(const Params& p);
SampledSet buildY(const Params& p);
double fractalExponent(const Params& p);

// Largest ratio |B_r(c) ∩ Y| / r^alpha over the given radii and centers.
double fractalConstant(const SampledSet& y, std::span<const double> radii,
                       const PointSet& centers);

}  // namespace decouplab
