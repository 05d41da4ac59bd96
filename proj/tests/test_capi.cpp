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

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "decouplab/decouplab.h"

namespace fs = std::filesystem;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  dl_string_free(s);
  return out;
}

fs::path tempDir(const char* tag) {
  auto p = fs::temp_directory_path() /
           (std::string("decouplab-capi-") + tag + "-" +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(dl_version()) == "0.1.0");
  CHECK(std::string(dl_status_name(DL_OK)) == "ok");
  CHECK(std::string(dl_status_name(DL_ERR_BUDGET)) == "budget refusal");
  CHECK(std::string(dl_csv_header()).rfind("campaign,d,sigma,R,p,", 0) == 0);
}

TEST_CASE("null arguments") {
  dl_session* s = nullptr;
  CHECK(dl_session_create(nullptr, &s) == DL_ERR_ARGUMENT);
  CHECK(std::string(dl_last_error()).find("config_json") != std::string::npos);
  CHECK(dl_session_run(nullptr, "decouple", nullptr) == DL_ERR_ARGUMENT);
  CHECK(dl_record_passed(nullptr) == 0);
  CHECK(dl_session_campaign_count(nullptr) == 0);
  dl_session_destroy(nullptr);
  dl_record_destroy(nullptr);
  dl_string_free(nullptr);
}

TEST_CASE("config errors map to DL_ERR_CONFIG") {
  dl_session* s = nullptr;
  CHECK(dl_session_create(R"({"sigma": 0.7})", &s) == DL_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(std::string(dl_last_error()).find("0 < sigma < 1/2") != std::string::npos);
  CHECK(dl_session_create(R"({"bogus": 1})", &s) == DL_ERR_CONFIG);
  CHECK(dl_session_create("{", &s) == DL_ERR_CONFIG);
}

TEST_CASE("session lifecycle") {
  const auto cache = tempDir("session");
  const std::string cfg = R"({"R": [256, 512, 1024, 2048], "cacheDir": ")" + cache.string() + "\"}";
  dl_session* s = nullptr;
  REQUIRE(dl_session_create(cfg.c_str(), &s) == DL_OK);
  CHECK(dl_session_dimension(s) == 2);
  CHECK(dl_session_campaign_count(s) == 3);
  CHECK(std::string(dl_session_campaign_name(s, 1)) == "decouple");
  CHECK(dl_session_campaign_name(s, 3) == nullptr);

  char hash[65];
  REQUIRE(dl_session_config_hash(s, "decouple", hash) == DL_OK);
  CHECK(std::strlen(hash) == 64);
  CHECK(dl_session_config_hash(s, "nonsense", hash) == DL_ERR_CONFIG);

  char* text = nullptr;
  REQUIRE(dl_session_config(s, &text) == DL_OK);
  CHECK(take(text).find("\"sigma\"") != std::string::npos);

  double cost = 0.0;
  REQUIRE(dl_session_estimate_cost(s, "decouple", &cost) == DL_OK);
  CHECK(cost > 0.0);

  int lines = 0;
  dl_session_set_progress(s, [](const char*, void* u) { ++*static_cast<int*>(u); }, &lines);
  dl_record* rec = nullptr;
  REQUIRE(dl_session_run(s, "decouple", &rec) == DL_OK);
  CHECK(lines == 4);
  CHECK(dl_record_passed(rec) == 1);
  CHECK(dl_record_cache_hit(rec) == 0);
  CHECK(dl_record_wall_clock(rec) > 0.0);

  char* csv = nullptr;
  REQUIRE(dl_record_to_csv(rec, 1, &csv) == DL_OK);
  const auto csvText = take(csv);
  CHECK(std::count(csvText.begin(), csvText.end(), '\n') == 5);

  char* json = nullptr;
  REQUIRE(dl_record_to_json(rec, 0, &json) == DL_OK);
  const auto jsonText = take(json);
  dl_record* back = nullptr;
  REQUIRE(dl_record_from_json(jsonText.c_str(), &back) == DL_OK);
  char* json2 = nullptr;
  REQUIRE(dl_record_to_json(back, 0, &json2) == DL_OK);
  CHECK(take(json2) == jsonText);
  dl_record_destroy(back);
  CHECK(dl_record_from_json("{\"x\": 1}", &back) == DL_ERR_IO);
  CHECK(dl_record_from_json("not json", &back) == DL_ERR_IO);

  char* summary = nullptr;
  REQUIRE(dl_record_summary(rec, &summary) == DL_OK);
  CHECK(take(summary).find("overall: PASS") != std::string::npos);
  dl_record_destroy(rec);

  dl_record* cached = nullptr;
  REQUIRE(dl_session_run(s, "decouple", &cached) == DL_OK);
  CHECK(dl_record_cache_hit(cached) == 1);
  dl_record_destroy(cached);

  char* list = nullptr;
  REQUIRE(dl_cache_list(cache.c_str(), &list) == DL_OK);
  CHECK(take(list).find(hash) != std::string::npos);
  size_t removed = 0;
  REQUIRE(dl_cache_clear(cache.c_str(), &removed) == DL_OK);
  CHECK(removed == 1);

  dl_session_destroy(s);
  fs::remove_all(cache);
}

TEST_CASE("budget refusal") {
  dl_session* s = nullptr;
  REQUIRE(dl_session_create(R"({"budget": 1000, "noCache": true})", &s) == DL_OK);
  dl_record* rec = nullptr;
  CHECK(dl_session_run(s, "decouple", &rec) == DL_ERR_BUDGET);
  CHECK(rec == nullptr);
  CHECK(std::string(dl_last_error()).find("budget") != std::string::npos);
  dl_session_destroy(s);
}

TEST_CASE("point evaluation") {
  dl_session* s = nullptr;
  REQUIRE(dl_session_create(R"({"R": 256})", &s) == DL_OK);
  const double pts[] = {0.0, 0.0, 3.7, -1.2, 500.0, 0.0};
  double re[3], im[3];
  REQUIRE(dl_session_evaluate(s, pts, 2, re, im) == DL_OK);
  CHECK(re[0] == doctest::Approx(0.0234375).epsilon(1e-13));
  CHECK(im[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(re[1] == doctest::Approx(0.0034801717021948767).epsilon(1e-9));
  CHECK(im[1] == doctest::Approx(-0.004136754811478106).epsilon(1e-9));
  CHECK(dl_session_evaluate(s, pts, 3, re, im) == DL_ERR_CONFIG);
  dl_session_destroy(s);
}

TEST_CASE("fit") {
  std::vector<double> R, v;
  for (int k = 8; k <= 13; ++k) {
    R.push_back(std::ldexp(1.0, k));
    v.push_back(std::pow(R.back(), -0.75));
  }
  dl_fit fit{};
  REQUIRE(dl_fit_exponent(R.data(), v.data(), R.size(), -0.75, 0.05, 0.05, &fit) == DL_OK);
  CHECK(fit.slope == doctest::Approx(-0.75));
  CHECK(fit.pass == 1);
  CHECK(dl_fit_exponent(R.data(), v.data(), 1, -0.75, 0.05, 0.05, &fit) != DL_OK);
}
