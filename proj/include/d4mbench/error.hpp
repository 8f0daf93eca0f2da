// Copyright 2026 The d4mbench Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace d4mbench {

enum class Errc {
  invalid_argument,
  kind_mismatch,
  policy,
  range,
  index,
  parse,
  encoding,
  fit_undefined,
  duplicate_table,
  unknown_table,
  unknown_option,
  writer_closed,
  no_local_tablets,
  startup,
  setup,
  conservation,
  io,
};

std::string_view errc_name(Errc code) noexcept;

/// Every library failure is reported as an Error carrying a stable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by the benchmark setup recipe; step() is the 1-based recipe step that failed.
class SetupError : public Error {
 public:
  SetupError(int step, const std::string& what)
      : Error(Errc::setup, "step " + std::to_string(step) + ": " + what), step_(step) {}

  int step() const noexcept { return step_; }

 private:
  int step_;
};

}  // namespace d4mbench
