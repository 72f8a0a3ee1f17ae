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

// Expected metric values on data/fixtures/metrics, counted by hand.

#ifndef LEXCHECK_TESTS_HAND_COUNTS_H_
#define LEXCHECK_TESTS_HAND_COUNTS_H_

#include <cstdint>

namespace lexcheck::testing {

struct HandCount {
  const char* axis;
  const char* group;
  const char* metric;
  double numerator;
  std::int64_t denominator;  // 0 for values without recount support
  double value;
};

inline constexpr HandCount kHandCounts[] = {
    {"overall", "all", "overall_score", 97.0 / 6, 20, 97.0 / 120},
    {"overall", "all", "general_score", 17, 20, 17.0 / 20},
    {"overall", "all", "changed", 10, 20, 0.5},
    {"overall", "all", "invariance", 8, 14, 8.0 / 14},
    {"overall", "all", "change_alignment", 4, 6, 4.0 / 6},
    {"overall", "all", "statute_correctness", 3, 6, 0.5},
    {"overall", "all", "clean_accuracy", 4, 6, 4.0 / 6},
    {"overall", "all", "attack_accuracy", 3, 6, 0.5},
    {"overall", "all", "asr", 2, 4, 0.5},
    {"overall", "all", "crr", 2, 6, 2.0 / 6},
    {"overall", "all", "attack_invariance", 3, 6, 0.5},
    {"overall", "all", "attack_precision", 5, 6, 5.0 / 6},
    {"overall", "all", "attack_recall", 5, 7, 5.0 / 7},
    {"overall", "all", "attack_f1", 0, 0, 10.0 / 13},
    {"overall", "all", "positive_exactness", 6, 10, 0.6},
    {"overall", "all", "macro_exactness", 0, 0, 0.625},
    {"overall", "all", "gold_omission", 3, 10, 0.3},
    {"overall", "all", "wrong_similar_selection", 3, 10, 0.3},
    {"overall", "all", "false_activation", 1, 30, 1.0 / 30},
    {"overall", "all", "bias_magnitude", 0, 0, 1.0 / 12},
    {"family", "JudicialFairness", "invariance", 2, 4, 0.5},
    {"family", "BenignRobustness", "invariance", 3, 4, 0.75},
    {"clean", "all", "general_precision", 2, 2, 1},
    {"clean", "all", "general_recall", 2, 3, 2.0 / 3},
    {"clean", "all", "general_f1", 0, 0, 0.8},
    {"clean", "all", "specific_precision", 19, 20, 0.95},
    {"clean", "all", "specific_recall", 19, 20, 0.95},
    {"clean", "all", "specific_f1", 0, 0, 0.95},
    {"clean", "all", "rmse_months", 25, 2, 3.5355339059327378},
    {"clean", "all", "valid_ratio", 18, 20, 0.9},
    {"clean", "all", "exact_match", 18, 20, 0.9},
};

}  // namespace lexcheck::testing

#endif  // LEXCHECK_TESTS_HAND_COUNTS_H_
