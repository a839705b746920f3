// Copyright 2026 The sophgrade Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synthetic.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

namespace sophgrade::testkit {

SyntheticData make_synthetic(const ConstructCatalog& catalog,
                             const SyntheticOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> latent(0, 3);
  std::uniform_int_distribution<int> noise(-1, 1);
  std::uniform_int_distribution<int> type(0, 2);
  std::uniform_int_distribution<int> year(o.first_year, o.last_year);
  std::uniform_int_distribution<int> month(1, 12);
  std::uniform_int_distribution<int> day(1, 28);
  std::bernoulli_distribution corrupt(o.corrupt_fraction);

  SyntheticData d;
  d.manifest =
      "email_id,external_id,email_type,date,subject,sender,screenshot_ref,sanitized,"
      "reconstructed\n";
  d.grades = "email_id,construct_id,grader_id,grade\n";
  const char* types[] = {"Phishing", "Scam", "Spam"};
  char buf[160];
  for (std::size_t e = 0; e < o.emails; ++e) {
    char id[16];
    std::snprintf(id, sizeof id, "E%05zu", e + 1);
    std::snprintf(buf, sizeof buf, "%s,x%zu,%s,%04d-%02d-%02d,subject %zu,s%zu@example.org,%s.png,true,false\n",
                  id, e, types[type(rng)], year(rng), month(rng), day(rng), e, e, id);
    d.manifest += buf;
    for (std::size_t c = 0; c < catalog.graded_count(); ++c) {
      const Construct& k = catalog.graded(c);
      const GradeScale& scale = catalog.scale(k.family);
      const int truth = latent(rng);
      const bool hit = k.family == Family::kPTech && corrupt(rng);
      for (std::size_t g = 0; g < o.graders; ++g) {
        int v = std::clamp(truth + noise(rng), scale.min, scale.max);
        if (hit && g + 1 == o.graders) v = std::min(v + o.corrupt_offset, scale.max);
        std::snprintf(buf, sizeof buf, "%s,%s,g%zu,%d\n", id, k.id.c_str(), g + 1, v);
        d.grades += buf;
      }
    }
  }
  return d;
}

AlphaInput random_alpha_input(std::mt19937_64& rng, int max_graders, int max_items,
                              int value_count, double missing) {
  std::uniform_int_distribution<int> graders(2, max_graders);
  std::uniform_int_distribution<int> items(1, max_items);
  std::uniform_int_distribution<int> value(0, value_count - 1);
  std::bernoulli_distribution drop(missing);
  AlphaInput in;
  in.value_count = value_count;
  const int h = graders(rng);
  const int n = items(rng);
  for (int u = 0; u < n; ++u) {
    std::vector<int> item;
    // Mostly-agreeing items keep p_e away from 1.
    const int anchor = value(rng);
    for (int g = 0; g < h; ++g) {
      if (drop(rng)) continue;
      item.push_back(rng() % 3 == 0 ? value(rng) : anchor);
    }
    in.items.push_back(std::move(item));
  }
  return in;
}

double brute_force_alpha(const std::vector<std::vector<int>>& items) {
  std::map<std::pair<int, int>, double> o;  // coincidences
  for (const auto& item : items) {
    const std::size_t m = item.size();
    if (m < 2) continue;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        if (a != b) o[{item[a], item[b]}] += 1.0 / static_cast<double>(m - 1);
      }
    }
  }
  std::map<int, double> marginal;
  double n = 0.0, observed_disagree = 0.0;
  for (const auto& [cd, w] : o) {
    marginal[cd.first] += w;
    n += w;
    if (cd.first != cd.second) observed_disagree += w;
  }
  double expected_disagree = 0.0;
  for (const auto& [c, nc] : marginal) {
    for (const auto& [k, nk] : marginal) {
      if (c != k) expected_disagree += nc * nk;
    }
  }
  return 1.0 - (n - 1.0) * observed_disagree / expected_disagree;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("sophgrade-" + tag + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace sophgrade::testkit
