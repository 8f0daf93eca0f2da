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

#include "d4mbench/merge_iterator.hpp"

namespace d4mbench {

bool MergingIterator::After::operator()(const Cursor& x, const Cursor& y) const {
  const Triple& tx = self->runs_[x.run][x.pos];
  const Triple& ty = self->runs_[y.run][y.pos];
  if (tx.row != ty.row) return tx.row > ty.row;
  if (tx.col != ty.col) return tx.col > ty.col;
  // Same key: the newest run surfaces first.
  return x.run < y.run;
}

MergingIterator::MergingIterator(std::vector<std::span<const Triple>> runs)
    : runs_(std::move(runs)), heap_(After{this}) {
  for (std::size_t r = 0; r < runs_.size(); ++r) push(r, 0);
}

void MergingIterator::push(std::size_t run, std::size_t pos) {
  if (pos < runs_[run].size()) heap_.push(Cursor{run, pos});
}

void MergingIterator::next() {
  const Cursor top = heap_.top();
  heap_.pop();
  const Triple& emitted = runs_[top.run][top.pos];
  // Drop older versions of the key just produced.
  while (!heap_.empty()) {
    const Cursor c = heap_.top();
    const Triple& t = runs_[c.run][c.pos];
    if (t.row != emitted.row || t.col != emitted.col) break;
    heap_.pop();
    push(c.run, c.pos + 1);
  }
  push(top.run, top.pos + 1);
}

std::vector<Triple> merge_runs(std::vector<std::span<const Triple>> runs) {
  std::vector<Triple> out;
  for (MergingIterator it(std::move(runs)); it.valid(); it.next()) out.push_back(it.current());
  return out;
}

}  // namespace d4mbench
