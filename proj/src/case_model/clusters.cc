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

#include "lexcheck/clusters.h"

#include <fstream>

#include "lexcheck/errors.h"

namespace lexcheck {

ClusterTable ParseClusters(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("clusters") || !doc["clusters"].is_array()) {
    throw SchemaError("clusters", "expected an object with a clusters list");
  }
  ClusterTable out;
  for (const auto& c : doc["clusters"]) {
    if (!c.contains("name") || !c["name"].is_string()) throw SchemaError("name", "cluster needs a name");
    if (!c.contains("articles") || !c["articles"].is_array()) {
      throw SchemaError("articles", "cluster needs an article list");
    }
    StatuteCluster cluster{c["name"].get<std::string>(), {}};
    for (const auto& a : c["articles"]) {
      if (!a.is_number_integer()) throw SchemaError("articles", "article numbers must be integers");
      cluster.articles.insert(a.get<ArticleNo>());
    }
    out.push_back(std::move(cluster));
  }
  return out;
}

ClusterTable LoadClusters(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return ParseClusters(nlohmann::json::parse(in));
}

nlohmann::ordered_json ClustersToJson(const ClusterTable& table) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : table) {
    arr.push_back(nlohmann::ordered_json{{"name", c.name}, {"articles", c.articles}});
  }
  return nlohmann::ordered_json{{"clusters", std::move(arr)}};
}

}  // namespace lexcheck
