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

#include "decouplab/decouplab.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

#include "core/cache.hpp"
#include "core/config.hpp"
#include "core/error.hpp"
#include "core/extension.hpp"
#include "core/record.hpp"
#include "core/session.hpp"

struct dl_session {
  decouplab::RunConfig config;
  dl_progress_fn progress = nullptr;
  void* progressUser = nullptr;
};

struct dl_record {
  decouplab::ResultRecord record;
};

namespace {

thread_local std::string lastError;

dl_status statusOf(decouplab::ErrorKind kind) {
  using decouplab::ErrorKind;
  switch (kind) {
    case ErrorKind::Config: return DL_ERR_CONFIG;
    case ErrorKind::Budget: return DL_ERR_BUDGET;
    case ErrorKind::Hypothesis: return DL_ERR_HYPOTHESIS;
    case ErrorKind::Numeric: return DL_ERR_NUMERIC;
    case ErrorKind::Io: return DL_ERR_IO;
  }
  return DL_ERR_INTERNAL;
}

template <typename Fn>
dl_status guarded(Fn&& fn) {
  lastError.clear();
  try {
    fn();
    return DL_OK;
  } catch (const decouplab::Error& e) {
    lastError = e.what();
    return statusOf(e.kind());
  } catch (const std::exception& e) {
    lastError = e.what();
    return DL_ERR_INTERNAL;
  } catch (...) {
    lastError = "unknown error";
    return DL_ERR_INTERNAL;
  }
}

dl_status nullArgument(const char* what) {
  lastError = std::string("null argument: ") + what;
  return DL_ERR_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string summaryOf(const decouplab::ResultRecord& rec) {
  using decouplab::formatDouble;
  const auto& r = rec.report;
  std::ostringstream os;
  os.precision(6);
  os << rec.campaign << " d=" << r.d << " sigma=" << r.sigma;
  if (r.p) os << " p=" << *r.p;
  if (r.alpha) os << " alpha=" << *r.alpha;
  if (rec.cacheHit) os << " (cached)";
  os << '\n';
  for (const auto& row : r.rows) {
    os << "  R=" << row.R << " lhs=" << row.lhs << " rhs=" << row.rhs << " ratio=" << row.ratio;
    if (row.M) os << " M=" << *row.M;
    if (row.comparability) os << " comparability=" << *row.comparability;
    if (row.incidence) os << " incidence=" << *row.incidence;
    if (row.fractalConstant) os << " fractalC=" << *row.fractalConstant;
    os << '\n';
  }
  for (const auto& [name, f] : r.fits)
    os << "  fit " << name << ": slope=" << f.slope << " predicted=" << f.predicted
       << " tol=" << f.tol << " eps=" << f.epsSlack << " maxResidual=" << f.maxResidual << " -> "
       << (f.pass ? "PASS" : "FAIL") << '\n';
  for (const auto& [name, h] : r.hypotheses)
    os << "  check " << name << ": " << h.value << " (bound " << h.bound << ") -> "
       << (h.pass ? "PASS" : "FAIL") << '\n';
  os << "  overall: " << (r.pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace

extern "C" {

const char* dl_version(void) { return decouplab::kVersion; }

const char* dl_last_error(void) { return lastError.c_str(); }

const char* dl_status_name(dl_status status) {
  switch (status) {
    case DL_OK: return "ok";
    case DL_ERR_CONFIG: return "config error";
    case DL_ERR_BUDGET: return "budget refusal";
    case DL_ERR_HYPOTHESIS: return "hypothesis failure";
    case DL_ERR_NUMERIC: return "numerical failure";
    case DL_ERR_IO: return "i/o error";
    case DL_ERR_ARGUMENT: return "invalid argument";
    case DL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void dl_string_free(char* s) { std::free(s); }

dl_status dl_session_create(const char* config_json, dl_session** out) {
  if (!config_json) return nullArgument("config_json");
  if (!out) return nullArgument("out");
  *out = nullptr;
  return guarded([&] {
    auto s = std::make_unique<dl_session>();
    s->config = decouplab::RunConfig::parse(config_json);
    *out = s.release();
  });
}

void dl_session_destroy(dl_session* session) { delete session; }

dl_status dl_session_set_progress(dl_session* session, dl_progress_fn fn, void* user) {
  if (!session) return nullArgument("session");
  session->progress = fn;
  session->progressUser = user;
  return DL_OK;
}

dl_status dl_session_config(const dl_session* session, char** out_json) {
  if (!session) return nullArgument("session");
  if (!out_json) return nullArgument("out_json");
  return guarded([&] { *out_json = duplicate(session->config.toJson().dump(2)); });
}

dl_status dl_session_config_hash(const dl_session* session, const char* campaign, char out[65]) {
  if (!session) return nullArgument("session");
  if (!campaign) return nullArgument("campaign");
  if (!out) return nullArgument("out");
  return guarded([&] {
    const auto h = session->config.hash(decouplab::campaignFromString(campaign));
    std::memcpy(out, h.c_str(), 65);
  });
}

size_t dl_session_campaign_count(const dl_session* session) {
  return session ? session->config.sweep.campaigns.size() : 0;
}

const char* dl_session_campaign_name(const dl_session* session, size_t i) {
  if (!session || i >= session->config.sweep.campaigns.size()) return nullptr;
  switch (session->config.sweep.campaigns[i]) {
    case decouplab::Campaign::Amplitude: return "amplitude";
    case decouplab::Campaign::Decoupling: return "decouple";
    case decouplab::Campaign::Corollary: return "corollary";
  }
  return nullptr;
}

dl_status dl_session_estimate_cost(const dl_session* session, const char* campaign, double* out) {
  if (!session) return nullArgument("session");
  if (!campaign) return nullArgument("campaign");
  if (!out) return nullArgument("out");
  return guarded([&] {
    *out = decouplab::estimateNodeCost(session->config.sweep,
                                       decouplab::campaignFromString(campaign));
  });
}

dl_status dl_session_run(dl_session* session, const char* campaign, dl_record** out) {
  if (!session) return nullArgument("session");
  if (!campaign) return nullArgument("campaign");
  if (!out) return nullArgument("out");
  *out = nullptr;
  return guarded([&] {
    decouplab::Progress progress;
    if (session->progress) {
      progress = [session](const std::string& line) {
        session->progress(line.c_str(), session->progressUser);
      };
    }
    auto rec = std::make_unique<dl_record>();
    rec->record = decouplab::runCampaignCached(
        session->config, decouplab::campaignFromString(campaign), progress, &std::cerr);
    *out = rec.release();
  });
}

dl_status dl_session_evaluate(const dl_session* session, const double* points, size_t count,
                              double* out_re, double* out_im) {
  if (!session) return nullArgument("session");
  if (!points && count) return nullArgument("points");
  if ((!out_re || !out_im) && count) return nullArgument("out_re/out_im");
  return guarded([&] {
    const auto p = session->config.sweep.at(session->config.sweep.Rlist.front());
    const auto cubes = decouplab::enumerateCubes(p);
    const auto plan = decouplab::makePlan(p, cubes, p.R);
    decouplab::PointSet pts(p.d);
    for (size_t i = 0; i < count; ++i) pts.push({points + i * p.d, static_cast<size_t>(p.d)});
    const auto values = decouplab::evaluate(plan, pts);
    for (size_t i = 0; i < count; ++i) {
      out_re[i] = values[i].real();
      out_im[i] = values[i].imag();
    }
  });
}

int dl_session_dimension(const dl_session* session) {
  return session ? session->config.sweep.base.d : 0;
}

int dl_record_passed(const dl_record* record) { return record && record->record.report.pass; }

int dl_record_cache_hit(const dl_record* record) { return record && record->record.cacheHit; }

double dl_record_wall_clock(const dl_record* record) {
  return record ? record->record.wallClockSeconds : 0.0;
}

dl_status dl_record_to_json(const dl_record* record, int include_timing, char** out) {
  if (!record) return nullArgument("record");
  if (!out) return nullArgument("out");
  return guarded(
      [&] { *out = duplicate(decouplab::toJson(record->record, include_timing != 0).dump(2)); });
}

dl_status dl_record_to_csv(const dl_record* record, int include_header, char** out) {
  if (!record) return nullArgument("record");
  if (!out) return nullArgument("out");
  return guarded([&] { *out = duplicate(decouplab::toCsv(record->record, include_header != 0)); });
}

dl_status dl_record_summary(const dl_record* record, char** out) {
  if (!record) return nullArgument("record");
  if (!out) return nullArgument("out");
  return guarded([&] { *out = duplicate(summaryOf(record->record)); });
}

dl_status dl_record_from_json(const char* json, dl_record** out) {
  if (!json) return nullArgument("json");
  if (!out) return nullArgument("out");
  *out = nullptr;
  return guarded([&] {
    auto rec = std::make_unique<dl_record>();
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      decouplab::fail(decouplab::ErrorKind::Io, std::string("record is not valid JSON: ") + e.what());
    }
    rec->record = decouplab::recordFromJson(doc);
    *out = rec.release();
  });
}

void dl_record_destroy(dl_record* record) { delete record; }

const char* dl_csv_header(void) {
  static const std::string header = decouplab::csvHeader();
  return header.c_str();
}

dl_status dl_fit_exponent(const double* R, const double* values, size_t count, double predicted,
                          double tol, double eps_slack, dl_fit* out) {
  if ((!R || !values) && count) return nullArgument("R/values");
  if (!out) return nullArgument("out");
  return guarded([&] {
    const auto f = decouplab::fitExponent({R, count}, {values, count}, predicted, tol, eps_slack);
    out->slope = f.slope;
    out->intercept = f.intercept;
    out->max_residual = f.maxResidual;
    out->predicted = f.predicted;
    out->pass = f.pass ? 1 : 0;
  });
}

dl_status dl_cache_list(const char* dir, char** out_json) {
  if (!out_json) return nullArgument("out_json");
  return guarded([&] {
    decouplab::RunConfig rc;
    if (dir) rc.cacheDir = dir;
    const decouplab::ResultCache cache(rc.resolvedCacheDir());
    nlohmann::json j = {{"dir", cache.dir().string()}, {"entries", cache.list()}};
    *out_json = duplicate(j.dump(2));
  });
}

dl_status dl_cache_clear(const char* dir, size_t* removed) {
  return guarded([&] {
    decouplab::RunConfig rc;
    if (dir) rc.cacheDir = dir;
    const auto n = decouplab::ResultCache(rc.resolvedCacheDir()).clear();
    if (removed) *removed = n;
  });
}

}  // extern "C"
