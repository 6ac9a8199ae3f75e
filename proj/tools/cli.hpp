// Copyright 2026 The beq Authors
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

#ifndef BEQ_TOOLS_CLI_HPP_
#define BEQ_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace beq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

// Entry point of the `beq` tool. Subcommands: run, sweep, validate, problems.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Splits on commas that are not nested inside parentheses.
std::vector<std::string> split_top_level(const std::string& list);

}  // namespace beq::cli

#endif  // BEQ_TOOLS_CLI_HPP_
