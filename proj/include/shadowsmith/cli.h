/**
 * Copyright 2026 The Shadowsmith Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SHADOWSMITH_CLI_H_
#define SHADOWSMITH_CLI_H_

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "shadowsmith/dataset.h"

namespace shadowsmith::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Environment variable consulted for --seed when neither the command line
// nor the config file sets it.
inline constexpr const char* kSeedEnvVar = "SHADOWSMITH_SEED";

// Parses a plain-text key-value file: one `key = value` per line, `#` or `;`
// comments, blank lines and `[section]` headers ignored. Keys may carry a
// leading `--`. Throws ConfigError on malformed lines.
std::map<std::string, std::string> ReadKeyValueFile(
    const std::filesystem::path& path);

// Dataset summary printed by `inspect`.
nlohmann::json InspectDataset(const Dataset& dataset);

// Entry point. args[0] is the program name. Results go to `out`, logs and
// diagnostics to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);
int Run(int argc, const char* const* argv);

}  // namespace shadowsmith::cli

#endif  // SHADOWSMITH_CLI_H_
