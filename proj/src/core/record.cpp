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

#include "core/record.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "core/error.hpp"

namespace decouplab {

using nlohmann::json;

namespace {

template <typename T>
json optionalJson(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optionalFrom(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json toJson(const SweepRow& r) {
  return {{"R", r.R},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"ratio", r.ratio},
          {"M", optionalJson(r.M)},
          {"caps", optionalJson(r.caps)},
          {"comparability", optionalJson(r.comparability)},
          {"incidence", optionalJson(r.incidence)},
          {"fractalConstant", optionalJson(r.fractalConstant)},
          {"samples", r.samples}};
}

SweepRow rowFromJson(const json& j) {
  SweepRow r;
  r.R = j.at("R").get<double>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.ratio = j.at("ratio").get<double>();
  r.M = optionalFrom<int>(j, "M");
  r.caps = optionalFrom<int>(j, "caps");
  r.comparability = optionalFrom<double>(j, "comparability");
  r.incidence = optionalFrom<double>(j, "incidence");
  r.fractalConstant = optionalFrom<double>(j, "fractalConstant");
  r.samples = j.at("samples").get<std::size_t>();
  return r;
}

std::string opt(const std::optional<double>& v) { return v ? formatDouble(*v) : ""; }
std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

}  // namespace

json toJson(const ExponentFit& f) {
  return {{"slope", f.slope},         {"intercept", f.intercept}, {"maxResidual", f.maxResidual},
          {"predicted", f.predicted}, {"tol", f.tol},             {"epsSlack", f.epsSlack},
          {"lowerSlackOnly", f.lowerSlackOnly}, {"upperBoundOnly", f.upperBoundOnly},
          {"pass", f.pass},           {"n", f.n}};
}

ExponentFit fitFromJson(const json& j) {
  ExponentFit f;
  f.slope = j.at("slope").get<double>();
  f.intercept = j.at("intercept").get<double>();
  f.maxResidual = j.at("maxResidual").get<double>();
  f.predicted = j.at("predicted").get<double>();
  f.tol = j.at("tol").get<double>();
  f.epsSlack = j.at("epsSlack").get<double>();
  f.lowerSlackOnly = j.at("lowerSlackOnly").get<bool>();
  f.upperBoundOnly = j.at("upperBoundOnly").get<bool>();
  f.pass = j.at("pass").get<bool>();
  f.n = j.at("n").get<std::size_t>();
  return f;
}

json toJson(const ResultRecord& rec, bool includeTiming) {
  const auto& r = rec.report;
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(toJson(row));
  json fits = json::object();
  for (const auto& [name, fit] : r.fits) fits[name] = toJson(fit);
  json hyps = json::object();
  for (const auto& [name, h] : r.hypotheses)
    hyps[name] = {{"description", h.description}, {"value", h.value}, {"bound", h.bound},
                  {"pass", h.pass}};
  json j = {{"campaign", rec.campaign},
            {"configHash", rec.configHash},
            {"config", rec.config},
            {"version", rec.version},
            {"d", r.d},
            {"sigma", r.sigma},
            {"p", optionalJson(r.p)},
            {"alpha", optionalJson(r.alpha)},
            {"seed", r.seed},
            {"rows", rows},
            {"fits", fits},
            {"hypotheses", hyps},
            {"pass", r.pass}};
  if (includeTiming) j["wallClockSeconds"] = rec.wallClockSeconds;
  return j;
}

ResultRecord recordFromJson(const json& j) {
  try {
    ResultRecord rec;
    rec.campaign = j.at("campaign").get<std::string>();
    rec.configHash = j.at("configHash").get<std::string>();
    rec.config = j.at("config");
    rec.version = j.at("version").get<std::string>();
    rec.wallClockSeconds = j.value("wallClockSeconds", 0.0);
    auto& r = rec.report;
    r.campaign = campaignFromString(rec.campaign);
    r.d = j.at("d").get<int>();
    r.sigma = j.at("sigma").get<double>();
    r.p = optionalFrom<double>(j, "p");
    r.alpha = optionalFrom<double>(j, "alpha");
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& row : j.at("rows")) r.rows.push_back(rowFromJson(row));
    for (const auto& [name, fit] : j.at("fits").items()) r.fits[name] = fitFromJson(fit);
    for (const auto& [name, h] : j.at("hypotheses").items())
      r.hypotheses[name] = {h.at("description").get<std::string>(), h.at("value").get<double>(),
                            h.at("bound").get<double>(), h.at("pass").get<bool>()};
    r.pass = j.at("pass").get<bool>();
    return rec;
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, std::string("malformed result record: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::Io, std::string("malformed result record: ") + e.what());
  }
}

std::string formatDouble(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csvHeader() {
  return "campaign,d,sigma,R,p,lhs,rhs,ratio,M,caps,comparability,incidence,fractal_constant,"
         "samples,lhs_slope,rhs_slope,ratio_slope,predicted_slope,pass";
}

std::string toCsv(const ResultRecord& rec, bool withHeader) {
  const auto& r = rec.report;
  auto slope = [&](const char* name) -> std::string {
    const auto it = r.fits.find(name);
    return it == r.fits.end() ? "" : formatDouble(it->second.slope);
  };
  std::string lhsSlope, predicted;
  if (r.campaign == Campaign::Amplitude) {
    lhsSlope = slope("amplitude");
    predicted = formatDouble(r.fits.at("amplitude").predicted);
  } else {
    lhsSlope = slope("lhs");
    predicted = formatDouble(r.fits.at("lhs").predicted);
  }

  std::ostringstream os;
  if (withHeader) os << csvHeader() << '\n';
  for (const auto& row : r.rows) {
    os << rec.campaign << ',' << r.d << ',' << formatDouble(r.sigma) << ',' << formatDouble(row.R)
       << ',' << opt(r.p) << ',' << formatDouble(row.lhs) << ',' << formatDouble(row.rhs) << ','
       << formatDouble(row.ratio) << ',' << opt(row.M) << ',' << opt(row.caps) << ','
       << opt(row.comparability) << ',' << opt(row.incidence) << ','
       << opt(row.fractalConstant) << ',' << row.samples << ',' << lhsSlope << ','
       << slope("rhs") << ',' << slope("ratio") << ',' << predicted << ','
       << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace decouplab
