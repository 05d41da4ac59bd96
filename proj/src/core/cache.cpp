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

#include "core/cache.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace decouplab {

namespace fs = std::filesystem;

fs::path ResultCache::pathFor(const std::string& hash) const { return dir_ / (hash + ".json"); }

std::optional<ResultRecord> ResultCache::lookup(const std::string& hash, std::ostream* warn) const {
  const auto path = pathFor(hash);
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    auto rec = recordFromJson(nlohmann::json::parse(buf.str()));
    if (rec.configHash != hash) fail(ErrorKind::Io, "hash mismatch");
    rec.cacheHit = true;
    return rec;
  } catch (const std::exception& e) {
    if (warn)
      *warn << "warning: ignoring corrupt cache entry " << path.string() << " (" << e.what()
            << "); recomputing\n";
    return std::nullopt;
  }
}

void ResultCache::store(const ResultRecord& rec) const {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) fail(ErrorKind::Io, "cannot create cache directory " + dir_.string() + ": " + ec.message());
  const auto final = pathFor(rec.configHash);
  const auto tmp = dir_ / (rec.configHash + ".json.tmp." + std::to_string(::getpid()) + "." +
                           std::to_string(counter++));
  {
    std::ofstream out(tmp);
    if (!out) fail(ErrorKind::Io, "cannot write cache file " + tmp.string());
    out << toJson(rec, true).dump(2) << '\n';
    if (!out) fail(ErrorKind::Io, "short write to cache file " + tmp.string());
  }
  fs::rename(tmp, final, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorKind::Io, "cannot move cache file into place: " + final.string());
  }
}

std::vector<std::string> ResultCache::list() const {
  std::vector<std::string> out;
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    const auto& path = entry.path();
    if (path.extension() == ".json") out.push_back(path.stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ResultCache::clear() const {
  std::size_t removed = 0;
  std::error_code ec;
  if (!fs::is_directory(dir_, ec)) return 0;
  std::vector<fs::path> victims;
  for (const auto& entry : fs::directory_iterator(dir_, ec)) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() == ".json" || name.find(".json.tmp.") != std::string::npos)
      victims.push_back(entry.path());
  }
  for (const auto& v : victims)
    if (fs::remove(v, ec)) ++removed;
  return removed;
}

}  // namespace decouplab
