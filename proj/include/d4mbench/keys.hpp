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

#include <cstdint>
#include <string>
#include <string_view>

// Fixed-width decimal row keys. Zero padding makes lexicographic order equal
// numeric order, which range partitioning relies on.

namespace d4mbench {

/// Number of decimal digits needed to print `v` (1 for zero).
unsigned decimal_digits(std::uint64_t v) noexcept;

/// `v` as exactly `width` zero-padded decimal digits. Throws Errc::encoding if it does not fit.
std::string pad_key(std::uint64_t v, unsigned width);

/// Parses an unsigned decimal key (digits only). Throws Errc::parse otherwise.
std::uint64_t parse_key(std::string_view key);

}  // namespace d4mbench
