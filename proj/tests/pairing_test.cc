// Copyright (c) 2026 The cvaug Authors. All Rights Reserved.
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

#include "cvaug/pairing.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cvaug/error.h"

namespace cvaug {
namespace {

SimilarityMatrix matrix(std::vector<std::string> src, std::vector<std::string> tgt,
                        std::vector<double> values) {
  SimilarityMatrix m;
  m.source_ids = std::move(src);
  m.target_ids = std::move(tgt);
  m.values = std::move(values);
  return m;
}

SimilarityMatrix three_targets() { return matrix({"s"}, {"t1", "t2", "t3"}, {0.9, 0.5, 0.1}); }

SimilarityMatrix random_matrix(std::mt19937_64& gen, std::size_t ns, std::size_t nt) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::string> s, t;
  for (std::size_t i = 0; i < ns; ++i) s.push_back("s" + std::to_string(i));
  for (std::size_t i = 0; i < nt; ++i) t.push_back("t" + std::to_string(i));
  std::vector<double> v(ns * nt);
  for (auto& x : v) x = u(gen);
  return matrix(s, t, v);
}

TEST(Pairs, TopTwoOfThree) {
  const PairSelection sel = select_pairs(three_targets(), PairStrategy::kTop, 2, 0);
  ASSERT_EQ(sel.pairs.size(), 2u);
  EXPECT_EQ(sel.pairs[0], (ConversionPair{"s", "t1", 0.9, 1}));
  EXPECT_EQ(sel.pairs[1], (ConversionPair{"s", "t2", 0.5, 2}));
  EXPECT_NEAR(sel.mean_similarity, 0.7, 1e-12);
}

TEST(Pairs, LastTwoOfThree) {
  const PairSelection sel = select_pairs(three_targets(), PairStrategy::kLast, 2, 0);
  EXPECT_EQ(sel.targets_of("s"), (std::vector<std::string>{"t3", "t2"}));
  EXPECT_NEAR(sel.mean_similarity, 0.3, 1e-12);
}

TEST(Pairs, ExhaustiveKGivesSameSets) {
  const auto m = three_targets();
  const auto top = select_pairs(m, PairStrategy::kTop, 3, 1).pair_set();
  EXPECT_EQ(select_pairs(m, PairStrategy::kLast, 3, 1).pair_set(), top);
  EXPECT_EQ(select_pairs(m, PairStrategy::kRandom, 3, 1).pair_set(), top);
}

TEST(Pairs, Errors) {
  EXPECT_THROW(select_pairs(three_targets(), PairStrategy::kTop, 4, 0), Error);
  EXPECT_THROW(select_pairs(matrix({"s"}, {}, {}), PairStrategy::kTop, 1, 0), Error);
  EXPECT_THROW(select_pairs(three_targets(), PairStrategy::kTop, 2, 0,
                            [](std::string_view, std::string_view t) { return t != "t1"; }),
               Error);
}

TEST(Pairs, TiesBrokenByTargetId) {
  const auto m = matrix({"s"}, {"c", "a", "b", "d"}, {0.5, 0.5, 0.5, 0.5});
  EXPECT_EQ(select_pairs(m, PairStrategy::kTop, 3, 0).targets_of("s"),
            (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(select_pairs(m, PairStrategy::kLast, 2, 0).targets_of("s"),
            (std::vector<std::string>{"a", "b"}));
}

TEST(Pairs, RandomIsReproducibleAndPerSourceStable) {
  std::mt19937_64 gen(4);
  const auto m = random_matrix(gen, 4, 10);
  const auto a = select_pairs(m, PairStrategy::kRandom, 3, 99);
  EXPECT_EQ(a.pairs, select_pairs(m, PairStrategy::kRandom, 3, 99).pairs);
  EXPECT_NE(a.pair_set(), select_pairs(m, PairStrategy::kRandom, 3, 100).pair_set());

  // Dropping a source leaves the others' draws untouched.
  SimilarityMatrix fewer = m;
  fewer.source_ids.erase(fewer.source_ids.begin());
  fewer.values.erase(fewer.values.begin(), fewer.values.begin() + 10);
  const auto b = select_pairs(fewer, PairStrategy::kRandom, 3, 99);
  for (const auto& src : fewer.source_ids) EXPECT_EQ(a.targets_of(src), b.targets_of(src));
}

TEST(Pairs, SimilarityMatchesMatrixAndRankBound) {
  std::mt19937_64 gen(8);
  for (int t = 0; t < 50; ++t) {
    const auto m = random_matrix(gen, 3, 7);
    for (auto st : {PairStrategy::kTop, PairStrategy::kRandom, PairStrategy::kLast}) {
      const auto sel = select_pairs(m, st, 3, t);
      ASSERT_EQ(sel.pairs.size(), 9u);
      double sum = 0;
      for (const auto& p : sel.pairs) {
        EXPECT_EQ(p.similarity, m.at(m.source_index(p.source_speaker), m.target_index(p.target_speaker)));
        EXPECT_GE(p.rank, 1u);
        EXPECT_LE(p.rank, 3u);
        sum += p.similarity;
      }
      EXPECT_NEAR(sel.mean_similarity, sum / 9.0, 1e-12);
    }
  }
}

TEST(Pairs, TopDominatesLast) {
  std::mt19937_64 gen(12);
  for (int t = 0; t < 200; ++t) {
    const auto m = random_matrix(gen, 3, 6);
    EXPECT_GE(select_pairs(m, PairStrategy::kTop, 2, 0).mean_similarity,
              select_pairs(m, PairStrategy::kLast, 2, 0).mean_similarity);
  }
}

TEST(Pairs, ExclusionsAreRespected) {
  const auto m = matrix({"a", "b"}, {"a", "b", "c"}, {1.0, 0.2, 0.1, 0.3, 1.0, 0.4});
  const auto sel = select_pairs(m, PairStrategy::kTop, 2, 0, exclude_self_pairs());
  for (const auto& p : sel.pairs) EXPECT_NE(p.source_speaker, p.target_speaker);
  EXPECT_EQ(sel.targets_of("a"), (std::vector<std::string>{"b", "c"}));
}

TEST(Pairs, CrosslingualEligibility) {
  Corpus c;
  auto profile = [](std::string id, Language l, AgeGroup a) {
    SpeakerProfile p;
    p.speaker_id = std::move(id);
    p.language = l;
    p.age_group = a;
    return p;
  };
  c.speakers = {profile("nl1", Language::kNl, AgeGroup::kChild),
                profile("de1", Language::kDe, AgeGroup::kChild),
                profile("de2", Language::kDe, AgeGroup::kAdult),
                profile("nl2", Language::kNl, AgeGroup::kChild)};
  const Corpus* ptr = &c;
  const auto dir = make_speaker_directory(std::span(&ptr, 1));
  const auto cl = crosslingual_eligibility(dir);
  EXPECT_FALSE(cl("nl1", "de1"));
  EXPECT_TRUE(cl("nl1", "de2"));  // adult target
  EXPECT_TRUE(cl("nl1", "nl2"));  // same language
  const auto ml = monolingual_eligibility(dir);
  EXPECT_FALSE(ml("nl1", "nl2"));
  EXPECT_TRUE(ml("nl1", "nl1"));
  EXPECT_TRUE(ml("nl1", "de1"));
}

TEST(Folds, NestedAndExhaustive) {
  std::mt19937_64 gen(21);
  const auto m = random_matrix(gen, 2, 10);
  const auto plan = build_fold_plan(m, 10);
  ASSERT_EQ(plan.size(), 5u);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    EXPECT_EQ(plan[i].k, 2 * (i + 1));
    EXPECT_EQ(plan[i].strategy, PairStrategy::kTop);
    if (i > 0) {
      const auto small = plan[i - 1].pair_set(), big = plan[i].pair_set();
      EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    }
  }
  EXPECT_EQ(plan.back().pairs.size(), 20u);  // every target
  EXPECT_THROW(build_fold_plan(m, 12), Error);
}

TEST(Folds, EqualSimilaritiesFollowIdOrder) {
  const auto m = matrix({"s"}, {"t3", "t1", "t4", "t2"}, {0.2, 0.2, 0.2, 0.2});
  const auto plan = build_fold_plan(m, 4);
  EXPECT_EQ(plan[0].targets_of("s"), (std::vector<std::string>{"t1", "t2"}));
  EXPECT_EQ(plan[1].targets_of("s"), (std::vector<std::string>{"t1", "t2", "t3", "t4"}));
}

TEST(PairFile, RoundTrip) {
  std::mt19937_64 gen(3);
  const auto sel = select_pairs(random_matrix(gen, 3, 5), PairStrategy::kRandom, 2, 77);
  const std::string text = format_pair_file(sel);
  const PairSelection back = parse_pair_file(text);
  EXPECT_EQ(back.strategy, sel.strategy);
  EXPECT_EQ(back.k, 2u);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.pairs, sel.pairs);
  EXPECT_EQ(format_pair_file(back), text);
}

}  // namespace
}  // namespace cvaug
