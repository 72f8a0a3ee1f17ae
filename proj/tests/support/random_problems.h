// Copyright 2026 The Lexcheck Authors.
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

// Random ground problems and guards for property tests.

#ifndef LEXCHECK_TESTS_RANDOM_PROBLEMS_H_
#define LEXCHECK_TESTS_RANDOM_PROBLEMS_H_

#include <random>

#include "lexcheck/compiler.h"
#include "lexcheck/statute_kb.h"

namespace lexcheck::testing {

struct ProblemShape {
  int max_atoms = 12;
  int max_boolean_constraints = 8;
  int max_adjustments = 2;  // per direction
  double penalty_chance = 0.7;
};

// Atoms are drawn from Boolean predicates b0.., an enum E over v0..v3 and
// integer predicates N and M. RandomAxioms() makes E exclusive.
GroundProblem RandomProblem(std::mt19937_64& rng, const ProblemShape& shape);

// Shuffles the constraint order of a problem.
GroundProblem ShuffledConstraints(const GroundProblem& problem, std::mt19937_64& rng);

ExclusivityAxioms RandomAxioms();

GuardExpr RandomGuard(std::mt19937_64& rng, int depth);

// Two guards, related by construction about half the time.
std::pair<GuardExpr, GuardExpr> RandomGuardPair(std::mt19937_64& rng);

}  // namespace lexcheck::testing

#endif  // LEXCHECK_TESTS_RANDOM_PROBLEMS_H_
