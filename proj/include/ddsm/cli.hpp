#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The DDSM Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <iosfwd>
#include <string>
#include <vector>

namespace ddsm {

/// Process exit codes of the `ddsm` tool.
enum ExitCode : int
{
  kExitOk       = 0,
  kExitFailure  = 1,  // runtime failure, unreadable input, failed verification
  kExitUsage    = 2,
  kExitCapacity = 3,
};

/// Entry point of the `ddsm` tool (gen, run, sweep, verify). `args` excludes
/// the program name.
int run_cli(std::vector<std::string> const &args, std::ostream &out, std::ostream &err);

}  // namespace ddsm
