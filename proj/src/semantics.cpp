// Copyright 2026 The mmsynth Authors.
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

#include "mmsynth/semantics.hpp"

#include <unordered_map>

namespace mmsynth {

namespace {

const Words& full_value(Semantics& sem, const Term& t,
                        std::unordered_map<Term, Words, TermHash>& memo) {
  if (auto it = memo.find(t); it != memo.end()) return it->second;
  Words v;
  if (t.is_constant()) {
    v = sem.constant_value(t);
  } else {
    std::vector<const Words*> kids;
    kids.reserve(t.arity());
    for (const Term& c : t.children()) kids.push_back(&full_value(sem, c, memo));
    v = sem.apply(t.op(), kids);
  }
  return memo.emplace(t, std::move(v)).first->second;
}

}  // namespace

Words evaluate(Semantics& sem, const Term& t) {
  std::unordered_map<Term, Words, TermHash> memo;
  return full_value(sem, t, memo);
}

Words interpret(Semantics& sem, const Dsl& dsl, const Term& t) {
  (void)dsl;
  std::unordered_map<Term, Words, TermHash> memo;
  return sem.project(t.sort(), full_value(sem, t, memo));
}

bool consistent(Semantics& sem, const Dsl& dsl, const Term& t) {
  if (t.sort() != dsl.closed_sort()) return false;
  return sem.consistent(interpret(sem, dsl, t));
}

}  // namespace mmsynth
