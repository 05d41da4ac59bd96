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

#include "core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/extension.hpp"
#include "core/norms.hpp"
#include "core/quadrature.hpp"
#include "core/rng.hpp"
#include "core/wavepacket.hpp"

namespace decouplab {

namespace {

std::uint64_t seedFor(std::uint64_t seed, std::size_t scaleIndex) {
  // splitmix64 step keyed by the scale index
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (scaleIndex + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void say(const Progress& progress, const std::string& line) {
  if (progress) progress(line);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> column(const std::vector<SweepRow>& rows, double SweepRow::*field) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.*field);
  return out;
}

// All wave packets of g with the global activity rule applied.
std::vector<WavePacket> allPackets(const std::vector<CapPiece>& pieces, const Params& p) {
  std::vector<WavePacket> packets;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    auto part = packetize(pieces[k], k, p);
    packets.insert(packets.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }
  markActive(packets, p.activityThreshold);
  return packets;
}

bool allPass(const CampaignReport& r) {
  for (const auto& [name, fit] : r.fits)
    if (!fit.pass) return false;
  for (const auto& [name, h] : r.hypotheses)
    if (!h.pass) return false;
  return true;
}

}  // namespace

std::string toString(Campaign c) {
  switch (c) {
    case Campaign::Amplitude: return "amplitude";
    case Campaign::Decoupling: return "decouple";
    case Campaign::Corollary: return "corollary";
  }
  return "amplitude";
}

Campaign campaignFromString(const std::string& s) {
  if (s == "amplitude") return Campaign::Amplitude;
  if (s == "decouple" || s == "decoupling") return Campaign::Decoupling;
  if (s == "corollary") return Campaign::Corollary;
  fail(ErrorKind::Config, "unknown campaign '" + s + "' (expected amplitude, decouple, corollary)");
}

SweepConfig SweepConfig::defaults(int d) {
  SweepConfig cfg;
  cfg.base.d = d;
  const int lo = d == 2 ? 8 : 7;
  const int hi = d == 2 ? 13 : 10;
  for (int k = lo; k <= hi; ++k) cfg.Rlist.push_back(std::ldexp(1.0, k));
  cfg.base.R = cfg.Rlist.front();
  cfg.campaigns = {Campaign::Amplitude, Campaign::Decoupling, Campaign::Corollary};
  return cfg;
}

void SweepConfig::validate() const {
  require(Rlist.size() >= 4, ErrorKind::Config,
          "invariant violated: at least 4 scales R are needed for an exponent fit");
  for (std::size_t i = 1; i < Rlist.size(); ++i)
    require(Rlist[i] > Rlist[i - 1], ErrorKind::Config,
            "invariant violated: R list must be strictly increasing");
  for (double R : Rlist) at(R).validate();
  require(tol >= 0.0 && ratioTol >= 0.0 && hypothesisTol >= 0.0, ErrorKind::Config,
          "invariant violated: tolerances must be nonnegative");
  require(amplitudeSamples >= 1, ErrorKind::Config,
          "invariant violated: amplitudeSamples >= 1");
  require(nodeBudget > 0.0, ErrorKind::Config, "invariant violated: budget > 0");
}

Params SweepConfig::at(double R) const {
  Params p = base;
  p.R = R;
  return p;
}

ExponentFit fitExponent(std::span<const double> R, std::span<const double> values,
                        double predicted, double tol, double epsSlack) {
  require(R.size() == values.size(), ErrorKind::Config, "fit needs one value per scale");
  require(R.size() >= 4, ErrorKind::Config, "fit needs at least 4 records");
  const std::size_t n = R.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      fail(ErrorKind::Numeric, "fit input must be positive and finite (upstream numerical failure)");
    require(R[i] > 0.0, ErrorKind::Config, "fit scales must be positive");
    x[i] = std::log(R[i]);
    y[i] = std::log(values[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  require(sxx > 0.0, ErrorKind::Config, "fit needs distinct scales");

  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i)
    fit.maxResidual = std::max(fit.maxResidual, std::abs(y[i] - fit.intercept - fit.slope * x[i]));
  fit.predicted = predicted;
  fit.tol = tol;
  fit.epsSlack = epsSlack;
  fit.n = n;
  fit.pass = evaluatePass(fit);
  return fit;
}

bool evaluatePass(const ExponentFit& f) {
  if (f.upperBoundOnly) return f.slope <= f.predicted + f.tol;
  if (f.lowerSlackOnly)
    return f.slope <= f.predicted + f.tol && f.slope >= f.predicted - f.tol - f.epsSlack;
  return std::abs(f.slope - f.predicted) <= f.tol + f.epsSlack;
}

double amplitudeExponent(int d, double sigma) { return (d - 1) * (sigma - 1.0); }

double decouplingExponent(int d, double sigma) {
  return 0.5 * (d - 1) * sigma - (d - 1.0) * (d + 2.0) / (2.0 * (d + 1.0));
}

double corollaryExponent(int d, double sigma) { return 0.5 * (d - 3) * sigma - 0.5 * (d - 2); }

double decouplingLebesgueExponent(int d) { return 2.0 * (d + 1) / (d - 1); }

CampaignReport runAmplitudeCampaign(const SweepConfig& cfg, const Progress& progress) {
  cfg.validate();
  CampaignReport rep;
  rep.campaign = Campaign::Amplitude;
  rep.d = cfg.base.d;
  rep.sigma = cfg.base.sigma;
  rep.seed = cfg.seed;

  double worstDominance = 1.0, worstConstant = 0.0;
  for (std::size_t i = 0; i < cfg.Rlist.size(); ++i) {
    const auto p = cfg.at(cfg.Rlist[i]);
    const auto st = amplitudeAtLatticePoints(p, cfg.amplitudeSamples, seedFor(cfg.seed, i));
    SweepRow row;
    row.R = p.R;
    row.lhs = st.medianAmplitude;
    row.rhs = st.normalization;
    row.ratio = st.medianRatio;
    row.samples = st.count;
    rep.rows.push_back(row);
    worstDominance = std::min(worstDominance, st.offsetDominance);
    worstConstant = std::max(worstConstant, st.constant);
    say(progress, "amplitude R=" + fmt(p.R) + " median|g|=" + fmt(st.medianAmplitude) +
                      " ratio=" + fmt(st.medianRatio) + " C=" + fmt(st.constant));
  }
  const auto Rs = column(rep.rows, &SweepRow::R);
  rep.fits["amplitude"] = fitExponent(Rs, column(rep.rows, &SweepRow::lhs),
                                      amplitudeExponent(rep.d, rep.sigma), cfg.tol,
                                      cfg.base.epsSlack);
  rep.hypotheses["offset_dominance"] = {
      "fraction of lattice points where |g| is at least |g| at distance 1 (min over R)",
      worstDominance, 0.9, worstDominance >= 0.9};
  rep.hypotheses["amplitude_constant"] = {
      "C with |g| / R^{(d-1)(sigma-1)} in [1/C, C] at lattice points (max over R; reported)",
      worstConstant, 0.0, true};
  rep.pass = allPass(rep);
  return rep;
}

CampaignReport runDecouplingCampaign(const SweepConfig& cfg, const Progress& progress) {
  cfg.validate();
  CampaignReport rep;
  rep.campaign = Campaign::Decoupling;
  rep.d = cfg.base.d;
  rep.sigma = cfg.base.sigma;
  rep.seed = cfg.seed;
  const double q = decouplingLebesgueExponent(rep.d);
  rep.p = q;

  double worstComparability = 0.0;
  bool censusBounded = true;
  std::vector<double> Ms;
  for (std::size_t i = 0; i < cfg.Rlist.size(); ++i) {
    const auto p = cfg.at(cfg.Rlist[i]);
    const auto X = buildX(p);
    const auto cubes = enumerateCubes(p);
    const auto plan = makePlan(p, cubes, p.testRadius());
    const auto lhs = lpNormOnSet(evaluate(plan, X.points), X, q);

    const auto pieces = capDecompose(p);
    const auto packets = allPackets(pieces, p);
    const double comparability = comparabilityFactor(packets);
    worstComparability = std::max(worstComparability, comparability);
    if (comparability > kComparabilityLimit) {
      std::ostringstream os;
      os << "wave packet comparability factor " << comparability << " exceeds "
         << kComparabilityLimit << " at R = " << p.R
         << "; the comparable-magnitude hypothesis fails and the campaign is invalid";
      fail(ErrorKind::Hypothesis, os.str());
    }
    const auto census = censusAt(X.points, pieces, packets);
    const int M = maxCensus(census);
    censusBounded = censusBounded && M <= static_cast<int>(pieces.size());
    require(M >= 1, ErrorKind::Numeric, "no active wave packet meets X");

    const WeightedBall ball{p.R, p.decayPower};
    const auto rhs = rhsRefinedDecoupling(pieces, p, q, M, ball);

    SweepRow row;
    row.R = p.R;
    row.lhs = lhs.value;
    row.rhs = rhs.total.value;
    row.ratio = row.lhs / row.rhs;
    row.M = M;
    row.caps = static_cast<int>(pieces.size());
    row.comparability = comparability;
    row.samples = X.points.size();
    rep.rows.push_back(row);
    Ms.push_back(M);
    say(progress, "decouple R=" + fmt(p.R) + " lhs=" + fmt(row.lhs) + " rhs=" + fmt(row.rhs) +
                      " ratio=" + fmt(row.ratio) + " M=" + std::to_string(M) +
                      " comparability=" + fmt(comparability));
  }

  const auto Rs = column(rep.rows, &SweepRow::R);
  const double predicted = decouplingExponent(rep.d, rep.sigma);
  const double eps = cfg.base.epsSlack;
  rep.fits["lhs"] = fitExponent(Rs, column(rep.rows, &SweepRow::lhs), predicted, cfg.tol, eps);
  rep.fits["rhs"] = fitExponent(Rs, column(rep.rows, &SweepRow::rhs), predicted, cfg.tol, eps);
  auto ratio = fitExponent(Rs, column(rep.rows, &SweepRow::ratio), 0.0, cfg.ratioTol, eps);
  ratio.lowerSlackOnly = true;
  ratio.pass = evaluatePass(ratio);
  rep.fits["ratio"] = ratio;
  const auto mFit = fitExponent(Rs, Ms, (rep.d - 1) * rep.sigma, cfg.hypothesisTol, 0.0);
  rep.fits["M"] = mFit;

  rep.hypotheses["comparability"] = {"max/min active wave packet magnitude (max over R)",
                                     worstComparability, kComparabilityLimit,
                                     worstComparability <= kComparabilityLimit};
  rep.hypotheses["M_slope"] = {"fitted slope of max M over X against (d-1) sigma", mFit.slope,
                               mFit.predicted, mFit.pass};
  rep.hypotheses["M_bound"] = {"M(x) <= number of nonempty caps at every sample of X",
                               censusBounded ? 1.0 : 0.0, 1.0, censusBounded};
  rep.pass = allPass(rep);
  return rep;
}

CampaignReport runCorollaryCampaign(const SweepConfig& cfg, const Progress& progress) {
  cfg.validate();
  CampaignReport rep;
  rep.campaign = Campaign::Corollary;
  rep.d = cfg.base.d;
  rep.sigma = cfg.base.sigma;
  rep.seed = cfg.seed;
  rep.p = 2.0;
  rep.alpha = fractalExponent(cfg.base);
  const int d = rep.d;

  double worstFractal = 0.0;
  for (std::size_t i = 0; i < cfg.Rlist.size(); ++i) {
    const auto p = cfg.at(cfg.Rlist[i]);
    const auto Y = buildY(p);
    const auto cubes = enumerateCubes(p);
    const auto plan = makePlan(p, cubes, p.testRadius());
    const auto lhs = lpNormOnSet(evaluate(plan, Y.points), Y, 2.0);
    const double rhs =
        std::pow(p.R, (*rep.alpha - 0.5 * (d - 1)) / (d + 1.0)) * l2DensityNorm(p);

    const auto pieces = capDecompose(p);
    const auto packets = allPackets(pieces, p);
    const auto fractions = incidenceFractions(Y, pieces, packets);
    double incidence = 0.0;
    for (std::size_t k = 0; k < packets.size(); ++k)
      if (packets[k].active) incidence = std::max(incidence, fractions[k]);

    Rng rng(seedFor(cfg.seed, i));
    PointSet centers(d);
    for (std::size_t c = 0; c < cfg.fractalCenters; ++c) centers.push(rng.inBall(d, p.testRadius()));
    for (auto c : rng.sample(Y.cellCenters.size(), cfg.fractalCenters))
      centers.push(Y.cellCenters[c]);
    std::vector<double> radii;
    for (double r = 1.0; r <= p.R; r *= 2.0) radii.push_back(r);
    const double fractal = fractalConstant(Y, radii, centers);
    worstFractal = std::max(worstFractal, fractal);

    SweepRow row;
    row.R = p.R;
    row.lhs = lhs.value;
    row.rhs = rhs;
    row.ratio = lhs.value / rhs;
    row.caps = static_cast<int>(pieces.size());
    row.incidence = incidence;
    row.fractalConstant = fractal;
    row.samples = Y.points.size();
    rep.rows.push_back(row);
    say(progress, "corollary R=" + fmt(p.R) + " lhs=" + fmt(row.lhs) + " rhs=" + fmt(rhs) +
                      " ratio=" + fmt(row.ratio) + " incidence=" + fmt(incidence) +
                      " fractalC=" + fmt(fractal));
  }

  const auto Rs = column(rep.rows, &SweepRow::R);
  const double predicted = corollaryExponent(d, rep.sigma);
  const double eps = cfg.base.epsSlack;
  rep.fits["lhs"] = fitExponent(Rs, column(rep.rows, &SweepRow::lhs), predicted, cfg.tol, eps);
  rep.fits["rhs"] = fitExponent(Rs, column(rep.rows, &SweepRow::rhs), predicted, cfg.tol, eps);
  auto ratio = fitExponent(Rs, column(rep.rows, &SweepRow::ratio), 0.0, cfg.ratioTol, eps);
  ratio.lowerSlackOnly = true;
  ratio.pass = evaluatePass(ratio);
  rep.fits["ratio"] = ratio;

  std::vector<double> inc;
  for (const auto& r : rep.rows) inc.push_back(*r.incidence);
  auto incFit = fitExponent(Rs, inc, -0.5 * (d - 1), cfg.hypothesisTol, 0.0);
  incFit.upperBoundOnly = true;
  incFit.pass = evaluatePass(incFit);
  rep.fits["incidence"] = incFit;

  const double fractalBound = std::ldexp(1.0, d);
  rep.hypotheses["fractal_constant"] = {"max |B_r ∩ Y| / r^alpha over tested r and centers",
                                        worstFractal, fractalBound, worstFractal <= fractalBound};
  rep.hypotheses["incidence_slope"] = {
      "fitted slope of the largest wave packet / Y incidence fraction, at most -(d-1)/2 + tol",
      incFit.slope, incFit.predicted + incFit.tol, incFit.pass};
  rep.pass = allPass(rep);
  return rep;
}

CampaignReport runCampaign(const SweepConfig& cfg, Campaign c, const Progress& progress) {
  switch (c) {
    case Campaign::Amplitude: return runAmplitudeCampaign(cfg, progress);
    case Campaign::Decoupling: return runDecouplingCampaign(cfg, progress);
    case Campaign::Corollary: return runCorollaryCampaign(cfg, progress);
  }
  fail(ErrorKind::Config, "unknown campaign");
}

double estimateNodeCost(const SweepConfig& cfg, Campaign c) {
  double total = 0.0;
  for (double R : cfg.Rlist) {
    const auto p = cfg.at(R);
    p.validate();
    const int d = p.d;
    const int k = d - 1;
    const double cubes = std::pow(static_cast<double>(std::max(p.cubesPerAxis(), 1)), k);
    const double h = p.cubeHalfWidth();
    auto nodesAt = [&](double reach) {
      const double band = 2.0 * std::numbers::pi * reach * h * std::sqrt(5.0) +
                          2.0 * std::numbers::pi * reach * h * h;
      return std::pow(static_cast<double>(gaussOrderForBandwidth(band, p.quadOrder)), k);
    };
    const double rho = p.testRadius();
    const double s1 = p.latticeScale();
    const double ballVolume =
        std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(rho, d);
    const double lattice = ballVolume / (std::pow(s1, k) * s1 * s1);
    const double perCell = std::pow(std::max(1.0, std::round(1.0 / p.sampleSpacing)), d);
    const double samples = lattice * perCell;

    if (c == Campaign::Amplitude) {
      total += 2.0 * cfg.amplitudeSamples * cubes * nodesAt(rho + 1.0);
      continue;
    }
    total += samples * cubes * nodesAt(rho);
    // packet magnitudes: tubes meeting B_rho, >= 32 samples each, per cap
    const double tubes = std::pow(2.0 * rho / p.tubeWidth() + 2.0, k);
    total += cubes * tubes * 32.0 * std::pow(2.0, k - 1) * nodesAt(rho);
    if (c == Campaign::Decoupling) {
      const double sphere = d == 2 ? 128.0 : (d == 3 ? 24.0 * 48.0 : std::pow(12.0, d - 2) * 24.0);
      const WeightedBall ball{p.R, p.decayPower};
      total += cubes * 64.0 * sphere * nodesAt(ball.cutoffRadius());
    }
  }
  return total;
}

void enforceBudget(const SweepConfig& cfg, Campaign c) {
  const double cost = estimateNodeCost(cfg, c);
  if (cost > cfg.nodeBudget) {
    std::ostringstream os;
    os << "campaign '" << toString(c) << "' needs about " << cost
       << " phase evaluations, above the budget of " << cfg.nodeBudget;
    fail(ErrorKind::Budget, os.str());
  }
}

}  // namespace decouplab
