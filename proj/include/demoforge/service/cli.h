// Copyright 2026 The Demoforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEMOFORGE_SERVICE_CLI_H_
#define DEMOFORGE_SERVICE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace demoforge::service {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs one `demoforge` command line (args[0] is the program name).
// Returns 0 on success, 2 on a usage error and 1 on a runtime error.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err);

// Parses "a..b" (inclusive) or a comma-separated list; InvalidArgumentError
// on bad input.
std::vector<uint64_t> parse_seed_list(const std::string& text);

}  // namespace demoforge::service

#endif  // DEMOFORGE_SERVICE_CLI_H_
