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

#include "d4mbench/value.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "d4mbench/error.hpp"
#include "d4mbench/keys.hpp"

namespace d4mbench {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::kind_mismatch: return "kind mismatch";
    case Errc::policy: return "policy error";
    case Errc::range: return "range error";
    case Errc::index: return "index error";
    case Errc::parse: return "parse error";
    case Errc::encoding: return "encoding error";
    case Errc::fit_undefined: return "fit undefined";
    case Errc::duplicate_table: return "duplicate table";
    case Errc::unknown_table: return "unknown table";
    case Errc::unknown_option: return "unknown option";
    case Errc::writer_closed: return "writer closed";
    case Errc::no_local_tablets: return "no local tablets";
    case Errc::startup: return "startup error";
    case Errc::setup: return "setup error";
    case Errc::conservation: return "conservation error";
    case Errc::io: return "i/o error";
  }
  return "error";
}

Value::Value(double number) : v_(number) {
  if (!std::isfinite(number)) throw Error(Errc::invalid_argument, "numeric values must be finite");
}

Value::Value(std::string text) : v_(std::move(text)) {
  if (std::get<std::string>(v_).empty()) {
    throw Error(Errc::invalid_argument, "textual values must be non-empty");
  }
}

Value Value::parse(std::string_view text) {
  if (auto x = parse_number(text)) return Value(*x);
  return Value(std::string(text));
}

double Value::number() const {
  if (const auto* x = std::get_if<double>(&v_)) return *x;
  throw Error(Errc::kind_mismatch, "value is textual");
}

const std::string& Value::text() const {
  if (const auto* s = std::get_if<std::string>(&v_)) return *s;
  throw Error(Errc::kind_mismatch, "value is numeric");
}

std::string Value::to_string() const {
  if (const auto* x = std::get_if<double>(&v_)) return format_number(*x);
  return std::get<std::string>(v_);
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // from_chars rejects a leading '+', which is fine: canonical output never has one.
  double x = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
    return std::nullopt;
  }
  return x;
}

std::string format_number(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

unsigned decimal_digits(std::uint64_t v) noexcept {
  unsigned d = 1;
  while (v >= 10) {
    v /= 10;
    ++d;
  }
  return d;
}

std::string pad_key(std::uint64_t v, unsigned width) {
  const unsigned digits = decimal_digits(v);
  if (digits > width) {
    throw Error(Errc::encoding, std::to_string(v) + " does not fit in " + std::to_string(width) +
                                    " digits");
  }
  std::string out(width, '0');
  auto [ptr, ec] = std::to_chars(out.data() + (width - digits), out.data() + width, v);
  (void)ptr;
  (void)ec;
  return out;
}

std::uint64_t parse_key(std::string_view key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
  if (key.empty() || ec != std::errc() || ptr != key.data() + key.size()) {
    throw Error(Errc::parse, "row key '" + std::string(key) + "' is not an unsigned integer");
  }
  return v;
}

}  // namespace d4mbench
