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

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "core/record.hpp"

namespace decouplab {

// Content-addressed store of result records: <dir>/<hash>.json. Writes go to
// a temporary file in the same directory and are renamed into place, so
// concurrent readers never see a partial record.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path pathFor(const std::string& hash) const;

  // Missing entry -> nullopt. A corrupt entry is reported on `warn` and
  // treated as missing.
  std::optional<ResultRecord> lookup(const std::string& hash, std::ostream* warn = nullptr) const;
  void store(const ResultRecord& rec) const;

  std::vector<std::string> list() const;
  std::size_t clear() const;

 private:
  std::filesystem::path dir_;
};

}  // namespace decouplab
