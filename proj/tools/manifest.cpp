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

#include "manifest.hpp"

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <ctime>

#ifndef PCAS_VERSION
#define PCAS_VERSION "0.0.0"
#endif

namespace pcas::cli {

nlohmann::ordered_json RunManifest::to_json() const
{
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
    return j;
}

std::string utc_timestamp()
{
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        errno = 0;
        const long long v = std::strtoll(epoch, &end, 10);
        if (errno == 0 && end != epoch && *end == '\0') t = static_cast<std::time_t>(v);
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest make_manifest(std::string subcommand)
{
    RunManifest m;
    m.subcommand = std::move(subcommand);
    m.version = PCAS_VERSION;
    m.timestamp = utc_timestamp();
    return m;
}

} // namespace pcas::cli
