/*
   Copyright 2026 The pcas Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace pcas::cli {

/// Everything needed to rerun a command: the subcommand, every resolved
/// parameter, the tool version, a UTC timestamp and the seed if any.
struct RunManifest {
    std::string subcommand;
    nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
    std::string version;
    std::string timestamp;
    std::optional<std::uint64_t> seed;

    nlohmann::ordered_json to_json() const;
};

/// UTC time as ISO 8601. SOURCE_DATE_EPOCH, when set to an integer,
/// replaces the wall clock so that output can be reproduced byte for byte.
std::string utc_timestamp();

RunManifest make_manifest(std::string subcommand);

} // namespace pcas::cli
