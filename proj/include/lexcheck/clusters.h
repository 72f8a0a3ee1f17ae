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

#ifndef LEXCHECK_CLUSTERS_H_
#define LEXCHECK_CLUSTERS_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "lexcheck/case_model.h"

namespace lexcheck {

// Provisions whose surface facts overlap, e.g. theft and fraud.
struct StatuteCluster {
  std::string name;
  ArticleSet articles;

  bool operator==(const StatuteCluster&) const = default;
};

using ClusterTable = std::vector<StatuteCluster>;

// {"clusters": [{"name": "...", "articles": [264, 266]}, ...]}
ClusterTable ParseClusters(const nlohmann::json& doc);
ClusterTable LoadClusters(const std::string& path);
nlohmann::ordered_json ClustersToJson(const ClusterTable& table);

}  // namespace lexcheck

#endif  // LEXCHECK_CLUSTERS_H_
