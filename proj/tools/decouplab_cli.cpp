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

// decouplab command line front end. Talks to the library only through the C
// interface in decouplab/decouplab.h.
//
// Exit codes: 0 all requested checks pass, 1 a check failed, 2 config error,
// 3 budget refusal, 4 any other runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "decouplab/decouplab.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;
constexpr int kExitRuntime = 4;

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

int exitCodeFor(dl_status s) {
  switch (s) {
    case DL_OK: return 0;
    case DL_ERR_CONFIG: return kExitConfig;
    case DL_ERR_BUDGET: return kExitBudget;
    case DL_ERR_HYPOTHESIS: return kExitFail;
    default: return kExitRuntime;
  }
}

void check(dl_status s) {
  if (s != DL_OK) throw CliError(exitCodeFor(s), std::string(dl_status_name(s)) + ": " + dl_last_error());
}

struct CString {
  char* p = nullptr;
  ~CString() { dl_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct SessionDeleter {
  void operator()(dl_session* s) const { dl_session_destroy(s); }
};
struct RecordDeleter {
  void operator()(dl_record* r) const { dl_record_destroy(r); }
};
using Session = std::unique_ptr<dl_session, SessionDeleter>;
using Record = std::unique_ptr<dl_record, RecordDeleter>;

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitConfig, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void writeFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw CliError(kExitRuntime, "cannot write " + path.string());
}

// "256,512", "2^8,2^9" or the range "2^8..2^13".
std::vector<double> parseRList(const std::string& text) {
  auto one = [&](std::string tok) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    try {
      if (auto caret = tok.find('^'); caret != std::string::npos)
        return std::pow(std::stod(tok.substr(0, caret)), std::stod(tok.substr(caret + 1)));
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw CliError(kExitConfig, "cannot parse R value '" + tok + "'");
    }
  };
  std::vector<double> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = text.substr(0, dots), hi = text.substr(dots + 2);
    const auto clo = lo.find('^'), chi = hi.find('^');
    if (clo == std::string::npos || chi == std::string::npos)
      throw CliError(kExitConfig, "R ranges are written b^m..b^n");
    const double base = one(lo.substr(0, clo));
    const int m = static_cast<int>(one(lo.substr(clo + 1)));
    const int n = static_cast<int>(one(hi.substr(chi + 1)));
    for (int k = m; k <= n; ++k) out.push_back(std::pow(base, k));
    return out;
  }
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(one(tok));
  return out;
}

struct Overrides {
  std::string config;
  std::string R;
  std::optional<int> d;
  std::optional<double> sigma;
  std::optional<std::string> out;
  bool noCache = false;
  std::optional<double> budget;
  std::optional<std::uint64_t> seed;
  std::optional<int> quadOrder;
  std::optional<std::string> cacheDir;
};

void addCommonFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--R", o.R, "scales, e.g. 256,512 or 2^8..2^13");
  cmd->add_option("--d", o.d, "dimension");
  cmd->add_option("--sigma", o.sigma, "spacing exponent, 0 < sigma < 1/2");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--no-cache", o.noCache, "bypass the result cache");
  cmd->add_option("--budget", o.budget, "node budget (phase evaluations)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--quad-order", o.quadOrder, "minimum Gauss-Legendre order per axis");
  cmd->add_option("--cache-dir", o.cacheDir, "cache directory");
}

json buildConfig(const Overrides& o) {
  json doc = json::object();
  if (!o.config.empty()) {
    try {
      doc = json::parse(readFile(o.config));
    } catch (const json::parse_error& e) {
      throw CliError(kExitConfig, "config error: " + o.config + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw CliError(kExitConfig, "config error: config must be a JSON object");
  }
  if (!o.R.empty()) doc["R"] = parseRList(o.R);
  if (o.d) {
    doc["d"] = *o.d;
    // A dimension change without scales picks that dimension's default sweep.
    if (o.R.empty() && o.config.empty()) doc.erase("R");
  }
  if (o.sigma) doc["sigma"] = *o.sigma;
  if (o.out) doc["out"] = *o.out;
  if (o.noCache) doc["noCache"] = true;
  if (o.budget) doc["budget"] = *o.budget;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.quadOrder) doc["quadOrder"] = *o.quadOrder;
  if (o.cacheDir) doc["cacheDir"] = *o.cacheDir;
  return doc;
}

Session openSession(const Overrides& o) {
  dl_session* raw = nullptr;
  check(dl_session_create(buildConfig(o).dump().c_str(), &raw));
  Session s(raw);
  dl_session_set_progress(
      s.get(), [](const char* line, void*) { std::cerr << line << std::endl; }, nullptr);
  return s;
}

std::string outDirOf(const dl_session* s) {
  CString cfg;
  check(dl_session_config(s, &cfg.p));
  return json::parse(cfg.str()).value("out", ".");
}

bool runOne(dl_session* s, const std::string& campaign) {
  dl_record* raw = nullptr;
  check(dl_session_run(s, campaign.c_str(), &raw));
  Record rec(raw);

  const fs::path dir = outDirOf(s);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError(kExitRuntime, "cannot create " + dir.string() + ": " + ec.message());
  CString csv, js, summary;
  check(dl_record_to_csv(rec.get(), 1, &csv.p));
  check(dl_record_to_json(rec.get(), 1, &js.p));
  check(dl_record_summary(rec.get(), &summary.p));
  writeFile(dir / (campaign + ".csv"), csv.str());
  writeFile(dir / (campaign + ".json"), js.str() + "\n");
  std::cout << summary.str();
  std::cout << "  wrote " << (dir / (campaign + ".csv")).string() << " and "
            << (dir / (campaign + ".json")).string() << " ("
            << (dl_record_cache_hit(rec.get()) ? "cache hit" : "computed") << ", "
            << dl_record_wall_clock(rec.get()) << " s)\n";
  return dl_record_passed(rec.get()) != 0;
}

int cmdCampaign(const Overrides& o, const std::string& campaign) {
  auto s = openSession(o);
  return runOne(s.get(), campaign) ? 0 : kExitFail;
}

int cmdSweep(const Overrides& o) {
  auto s = openSession(o);
  bool all = true;
  const std::size_t n = dl_session_campaign_count(s.get());
  if (n == 0) throw CliError(kExitConfig, "config error: no campaigns requested");
  for (std::size_t i = 0; i < n; ++i) all = runOne(s.get(), dl_session_campaign_name(s.get(), i)) && all;
  std::cout << "sweep: " << (all ? "PASS" : "FAIL") << '\n';
  return all ? 0 : kExitFail;
}

std::vector<double> parseRow(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(tok, &used));
  }
  return out;
}

int cmdEval(const Overrides& o, const std::vector<std::string>& pointArgs,
            const std::string& pointsFile) {
  auto s = openSession(o);
  const int d = dl_session_dimension(s.get());
  std::vector<double> coords;
  auto take = [&](const std::string& line, const std::string& where) {
    std::vector<double> row;
    try {
      row = parseRow(line);
    } catch (const std::exception&) {
      throw CliError(kExitConfig, "cannot parse point '" + line + "' in " + where);
    }
    if (static_cast<int>(row.size()) != d)
      throw CliError(kExitConfig, "point '" + line + "' in " + where + " needs " +
                                      std::to_string(d) + " coordinates");
    coords.insert(coords.end(), row.begin(), row.end());
  };
  for (const auto& p : pointArgs) take(p, "--point");
  if (!pointsFile.empty()) {
    std::stringstream in(readFile(pointsFile));
    std::string line;
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '#') take(line, pointsFile);
  }
  const std::size_t n = coords.size() / static_cast<std::size_t>(d);
  std::vector<double> re(n), im(n);
  check(dl_session_evaluate(s.get(), coords.data(), n, re.data(), im.data()));

  for (int k = 0; k < d; ++k) std::cout << "x" << k << ',';
  std::cout << "re,im,abs\n";
  std::cout.precision(17);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) std::cout << coords[i * d + k] << ',';
    std::cout << re[i] << ',' << im[i] << ',' << std::hypot(re[i], im[i]) << '\n';
  }
  return 0;
}

// Input: CSV with a header. The R column is "R"; the value column is chosen
// with --column, defaulting to "value", then "lhs", then the second column.
int cmdFit(const std::string& input, double predicted, const std::string& column, double tol,
           double eps) {
  std::stringstream in(readFile(input));
  std::string line;
  if (!std::getline(in, line)) throw CliError(kExitConfig, input + " is empty");
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) header.push_back(tok);
  }
  auto indexOf = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  const auto rCol = indexOf("R").value_or(0);
  std::optional<std::size_t> vCol;
  if (!column.empty()) {
    vCol = indexOf(column);
    if (!vCol) throw CliError(kExitConfig, "column '" + column + "' not found in " + input);
  } else {
    vCol = indexOf("value");
    if (!vCol) vCol = indexOf("lhs");
    if (!vCol) vCol = rCol == 0 ? 1 : 0;
  }
  if (*vCol >= header.size()) throw CliError(kExitConfig, input + " needs at least two columns");

  std::vector<double> R, v;
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) cells.push_back(tok);
    try {
      R.push_back(std::stod(cells.at(rCol)));
      v.push_back(std::stod(cells.at(*vCol)));
    } catch (const std::exception&) {
      throw CliError(kExitConfig, input + ":" + std::to_string(lineNo) + ": cannot parse row");
    }
  }
  dl_fit fit{};
  check(dl_fit_exponent(R.data(), v.data(), R.size(), predicted, tol, eps, &fit));
  std::cout.precision(10);
  std::cout << "column " << header[*vCol] << " (" << R.size() << " points)\n"
            << "slope = " << fit.slope << "\n"
            << "intercept = " << fit.intercept << "\n"
            << "max residual = " << fit.max_residual << "\n"
            << "predicted = " << fit.predicted << " (tol " << tol << ", eps " << eps << ") -> "
            << (fit.pass ? "PASS" : "FAIL") << "\n";
  return fit.pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decouplab: exponent experiments for refined decoupling"};
  app.set_version_flag("--version", std::string(dl_version()));
  app.require_subcommand(1);

  Overrides o;
  auto* amplitude = app.add_subcommand("amplitude", "amplitude law at lattice points");
  auto* decouple = app.add_subcommand("decouple", "refined decoupling sharpness sweep");
  auto* corollary = app.add_subcommand("corollary", "fractal-set corollary sweep");
  auto* sweep = app.add_subcommand("sweep", "every campaign listed in the config");
  for (auto* c : {amplitude, decouple, corollary, sweep}) addCommonFlags(c, o);

  auto* eval = app.add_subcommand("eval", "evaluate g at points, at the first R of the config");
  addCommonFlags(eval, o);
  std::vector<std::string> points;
  std::string pointsFile;
  eval->add_option("--point", points, "comma separated coordinates (repeatable)");
  eval->add_option("--points", pointsFile, "file with one comma separated point per line");

  auto* fit = app.add_subcommand("fit", "log-log slope of a CSV column against R");
  std::string input, column;
  double predicted = 0.0, tol = 0.05, eps = 0.05;
  fit->add_option("--input", input, "CSV file")->required();
  fit->add_option("--predicted", predicted, "predicted slope")->required();
  fit->add_option("--column", column, "value column");
  fit->add_option("--tol", tol, "slope tolerance");
  fit->add_option("--eps", eps, "extra slack");

  auto* cache = app.add_subcommand("cache", "inspect or clear the result cache");
  std::string cacheAction, cacheDir;
  cache->add_option("action", cacheAction, "list or clear")
      ->required()
      ->check(CLI::IsMember({"list", "clear"}));
  cache->add_option("--cache-dir", cacheDir, "cache directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (amplitude->parsed()) return cmdCampaign(o, "amplitude");
    if (decouple->parsed()) return cmdCampaign(o, "decouple");
    if (corollary->parsed()) return cmdCampaign(o, "corollary");
    if (sweep->parsed()) return cmdSweep(o);
    if (eval->parsed()) return cmdEval(o, points, pointsFile);
    if (fit->parsed()) return cmdFit(input, predicted, column, tol, eps);
    if (cache->parsed()) {
      const char* dir = cacheDir.empty() ? nullptr : cacheDir.c_str();
      if (cacheAction == "list") {
        CString out;
        check(dl_cache_list(dir, &out.p));
        std::cout << out.str() << '\n';
      } else {
        std::size_t removed = 0;
        check(dl_cache_clear(dir, &removed));
        std::cout << "removed " << removed << " entries\n";
      }
      return 0;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
