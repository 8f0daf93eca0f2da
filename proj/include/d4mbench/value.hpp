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

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace d4mbench {

enum class ValueKind : std::uint8_t { numeric, textual };

/// A cell value: either a non-empty string or a finite double.
class Value {
 public:
  Value(double number);  // NOLINT(google-explicit-constructor)
  template <std::integral I>
  Value(I number) : Value(static_cast<double>(number)) {}  // NOLINT
  Value(std::string text);  // NOLINT
  Value(const char* text) : Value(std::string(text)) {}  // NOLINT

  /// Numeric when the whole string parses as a finite double, textual otherwise.
  static Value parse(std::string_view text);

  ValueKind kind() const noexcept {
    return std::holds_alternative<double>(v_) ? ValueKind::numeric : ValueKind::textual;
  }
  bool is_numeric() const noexcept { return kind() == ValueKind::numeric; }

  double number() const;
  const std::string& text() const;

  /// Textual values verbatim; numbers in shortest round-trip decimal form.
  std::string to_string() const;

  friend bool operator==(const Value&, const Value&) = default;

 private:
  std::variant<double, std::string> v_;
};

/// Parses `text` as a finite double, requiring the whole string to be consumed.
std::optional<double> parse_number(std::string_view text);

/// Shortest decimal string that round-trips to `x`.
std::string format_number(double x);

struct Triple {
  std::string row;
  std::string col;
  Value val;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Bytes a triple occupies in a batch-writer block: row + col + value + 3 separators.
inline std::size_t serialized_size(std::string_view row, std::string_view col,
                                   std::string_view value) noexcept {
  return row.size() + col.size() + value.size() + 3;
}

}  // namespace d4mbench
