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

#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "d4mbench/value.hpp"

namespace d4mbench {

/// K-way merge over runs sorted by (row, col). Runs are ordered oldest to
/// newest; when several runs hold the same key only the newest one's value is
/// produced.
class MergingIterator {
 public:
  explicit MergingIterator(std::vector<std::span<const Triple>> runs);
  MergingIterator(const MergingIterator&) = delete;
  MergingIterator& operator=(const MergingIterator&) = delete;

  bool valid() const noexcept { return !heap_.empty(); }
  const Triple& current() const { return runs_[heap_.top().run][heap_.top().pos]; }
  void next();

 private:
  struct Cursor {
    std::size_t run;
    std::size_t pos;
  };
  struct After {
    const MergingIterator* self;
    bool operator()(const Cursor& x, const Cursor& y) const;
  };

  void push(std::size_t run, std::size_t pos);

  std::vector<std::span<const Triple>> runs_;
  std::priority_queue<Cursor, std::vector<Cursor>, After> heap_;
};

std::vector<Triple> merge_runs(std::vector<std::span<const Triple>> runs);

}  // namespace d4mbench
