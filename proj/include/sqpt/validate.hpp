// Copyright 2026 The sqpt Authors
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

#ifndef SQPT_VALIDATE_HPP
#define SQPT_VALIDATE_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sqpt {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick property checks across all modules. Stops after the first failure
// when `stop_on_failure` is set.
std::vector<CheckResult> run_validation(std::ostream* log, bool stop_on_failure = true);

}  // namespace sqpt

#endif  // SQPT_VALIDATE_HPP
