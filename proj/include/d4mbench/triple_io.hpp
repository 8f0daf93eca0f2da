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

#include <iosfwd>
#include <span>
#include <vector>

#include "d4mbench/value.hpp"

// Triple text format: `row<TAB>col<TAB>value<NEWLINE>`, one per line.
//
// A file is numeric when every value parses as a finite number and textual
// otherwise, so all triples read from one stream share a value kind.

namespace d4mbench {

void write_triples(std::ostream& out, std::span<const Triple> triples);
std::vector<Triple> read_triples(std::istream& in);

}  // namespace d4mbench
