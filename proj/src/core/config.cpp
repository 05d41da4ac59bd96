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

#include "core/config.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <set>

#include "core/error.hpp"

namespace decouplab {

namespace {

using nlohmann::json;

const std::set<std::string>& knownKeys() {
  static const std::set<std::string> keys = {
      "d",        "sigma",         "R",          "cd",          "quadOrder",
      "sampleSpacing", "epsSlack", "activityThreshold", "decayPower", "tol",
      "ratioTol", "hypothesisTol", "amplitudeSamples", "fractalCenters", "seed",
      "budget",   "campaigns",     "out",        "cacheDir",    "noCache"};
  return keys;
}

double number(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) fail(ErrorKind::Config, std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

long long integer(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number_integer())
    fail(ErrorKind::Config, std::string("config key '") + key + "' must be an integer");
  return v.get<long long>();
}

}  // namespace

RunConfig RunConfig::fromJson(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!knownKeys().count(key)) fail(ErrorKind::Config, "unknown config key '" + key + "'");

  RunConfig rc;
  const int d = doc.contains("d") ? static_cast<int>(integer(doc, "d")) : 2;
  if (d < 2) fail(ErrorKind::Config, "invariant violated: d >= 2 (got " + std::to_string(d) + ")");
  rc.sweep = SweepConfig::defaults(d);
  auto& s = rc.sweep;
  auto& p = s.base;

  if (doc.contains("sigma")) p.sigma = number(doc, "sigma");
  if (doc.contains("cd")) p.cd = number(doc, "cd");
  if (doc.contains("quadOrder")) p.quadOrder = static_cast<int>(integer(doc, "quadOrder"));
  if (doc.contains("sampleSpacing")) p.sampleSpacing = number(doc, "sampleSpacing");
  if (doc.contains("epsSlack")) p.epsSlack = number(doc, "epsSlack");
  if (doc.contains("activityThreshold")) p.activityThreshold = number(doc, "activityThreshold");
  if (doc.contains("decayPower")) p.decayPower = number(doc, "decayPower");
  if (doc.contains("tol")) s.tol = number(doc, "tol");
  if (doc.contains("ratioTol")) s.ratioTol = number(doc, "ratioTol");
  if (doc.contains("hypothesisTol")) s.hypothesisTol = number(doc, "hypothesisTol");
  if (doc.contains("amplitudeSamples")) {
    const auto n = integer(doc, "amplitudeSamples");
    if (n < 1) fail(ErrorKind::Config, "invariant violated: amplitudeSamples >= 1");
    s.amplitudeSamples = static_cast<std::size_t>(n);
  }
  if (doc.contains("fractalCenters")) {
    const auto n = integer(doc, "fractalCenters");
    if (n < 1) fail(ErrorKind::Config, "invariant violated: fractalCenters >= 1");
    s.fractalCenters = static_cast<std::size_t>(n);
  }
  if (doc.contains("seed")) {
    const auto& v = doc.at("seed");
    const bool ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    if (!ok) fail(ErrorKind::Config, "config key 'seed' must be a nonnegative integer");
    s.seed = v.get<std::uint64_t>();
  }
  if (doc.contains("budget")) s.nodeBudget = number(doc, "budget");
  if (doc.contains("R")) {
    const auto& v = doc.at("R");
    s.Rlist.clear();
    if (v.is_number()) {
      s.Rlist.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (const auto& r : v) {
        if (!r.is_number()) fail(ErrorKind::Config, "config key 'R' must hold numbers");
        s.Rlist.push_back(r.get<double>());
      }
    } else {
      fail(ErrorKind::Config, "config key 'R' must be a number or a list of numbers");
    }
    if (s.Rlist.empty()) fail(ErrorKind::Config, "config key 'R' is empty");
  }
  if (doc.contains("campaigns")) {
    const auto& v = doc.at("campaigns");
    if (!v.is_array()) fail(ErrorKind::Config, "config key 'campaigns' must be a list");
    s.campaigns.clear();
    for (const auto& c : v) {
      if (!c.is_string()) fail(ErrorKind::Config, "config key 'campaigns' must hold strings");
      s.campaigns.push_back(campaignFromString(c.get<std::string>()));
    }
  }
  if (doc.contains("out")) {
    if (!doc.at("out").is_string()) fail(ErrorKind::Config, "config key 'out' must be a string");
    rc.outDir = doc.at("out").get<std::string>();
  }
  if (doc.contains("cacheDir")) {
    if (!doc.at("cacheDir").is_string())
      fail(ErrorKind::Config, "config key 'cacheDir' must be a string");
    rc.cacheDir = doc.at("cacheDir").get<std::string>();
  }
  if (doc.contains("noCache")) {
    if (!doc.at("noCache").is_boolean()) fail(ErrorKind::Config, "config key 'noCache' must be a boolean");
    rc.noCache = doc.at("noCache").get<bool>();
  }

  p.R = s.Rlist.front();
  for (double R : s.Rlist) s.at(R).validate();
  for (std::size_t i = 1; i < s.Rlist.size(); ++i)
    if (!(s.Rlist[i] > s.Rlist[i - 1]))
      fail(ErrorKind::Config, "invariant violated: R list must be strictly increasing");
  if (!(s.tol >= 0.0 && s.ratioTol >= 0.0 && s.hypothesisTol >= 0.0))
    fail(ErrorKind::Config, "invariant violated: tolerances must be nonnegative");
  if (!(s.nodeBudget > 0.0)) fail(ErrorKind::Config, "invariant violated: budget > 0");
  return rc;
}

RunConfig RunConfig::parse(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  return fromJson(doc);
}

json RunConfig::canonical() const {
  const auto& s = sweep;
  const auto& p = s.base;
  json j;
  j["d"] = p.d;
  j["sigma"] = p.sigma;
  j["R"] = s.Rlist;
  j["cd"] = p.cd;
  j["quadOrder"] = p.quadOrder;
  j["sampleSpacing"] = p.sampleSpacing;
  j["epsSlack"] = p.epsSlack;
  j["activityThreshold"] = p.activityThreshold;
  j["decayPower"] = p.decayPower;
  j["tol"] = s.tol;
  j["ratioTol"] = s.ratioTol;
  j["hypothesisTol"] = s.hypothesisTol;
  j["amplitudeSamples"] = s.amplitudeSamples;
  j["fractalCenters"] = s.fractalCenters;
  j["seed"] = s.seed;
  j["budget"] = s.nodeBudget;
  json campaigns = json::array();
  for (auto c : s.campaigns) campaigns.push_back(toString(c));
  j["campaigns"] = campaigns;
  return j;
}

json RunConfig::toJson() const {
  auto j = canonical();
  j["out"] = outDir;
  if (cacheDir) j["cacheDir"] = *cacheDir;
  j["noCache"] = noCache;
  return j;
}

std::string RunConfig::hash(Campaign c) const {
  auto j = canonical();
  j["campaign"] = toString(c);
  j["version"] = kVersion;
  return sha256Hex(j.dump());
}

std::string RunConfig::resolvedCacheDir() const {
  if (cacheDir) return *cacheDir;
  if (const char* env = std::getenv(kCacheEnvVar); env && *env) return env;
  return ".decouplab-cache";
}

std::string sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::Io, "SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

}  // namespace decouplab
