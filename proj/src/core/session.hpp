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

#include <ostream>

#include "core/config.hpp"
#include "core/record.hpp"

namespace decouplab {

// Runs one campaign for a config: budget check, cache lookup, computation,
// cache store. `warn` receives cache warnings.
ResultRecord runCampaignCached(const RunConfig& cfg, Campaign c, const Progress& progress = {},
                               std::ostream* warn = nullptr);

}  // namespace decouplab
