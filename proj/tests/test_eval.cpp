// Copyright 2026 The replaycm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "core/eval.hpp"
#include "support/expect.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

namespace replaycm {
namespace {

using testing::EerOracle;
using testing::Gen;

std::vector<ScoreRecord> Records(const std::vector<double>& genuine,
                                 const std::vector<double>& replay) {
  std::vector<ScoreRecord> out;
  for (size_t i = 0; i < genuine.size(); ++i)
    out.push_back({"g" + std::to_string(i), genuine[i], Label::kGenuine});
  for (size_t i = 0; i < replay.size(); ++i)
    out.push_back({"r" + std::to_string(i), replay[i], Label::kReplay});
  return out;
}

TEST(Eer, Separable) {
  const EerResult r = ComputeEer(Records({2, 3}, {0, 1}));
  EXPECT_EQ(r.eer, 0.0);
  EXPECT_GT(r.threshold, 1.0);
  EXPECT_LE(r.threshold, 2.0);
}

TEST(Eer, Interleaved) {
  const EerResult r = ComputeEer(Records({0, 2}, {1, 3}));
  EXPECT_NEAR(r.eer, 0.5, 1e-15);
  EXPECT_GT(r.threshold, 1.0);
  EXPECT_LE(r.threshold, 2.0);
}

TEST(Eer, IdenticalMultisets) {
  EXPECT_NEAR(ComputeEer(Records({1, 2, 2, 5}, {2, 5, 1, 2})).eer, 0.5, 1e-15);
  EXPECT_NEAR(ComputeEer(Records({4}, {4})).eer, 0.5, 1e-15);
}

TEST(Eer, FullyInverted) {
  EXPECT_EQ(ComputeEer(Records({0, 1}, {2, 3})).eer, 1.0);
}

TEST(Eer, Errors) {
  EXPECT_ERROR_CODE(ComputeEer(Records({1, 2}, {})), ErrorCode::kOneClassOnly);
  EXPECT_ERROR_CODE(ComputeEer(Records({}, {1})), ErrorCode::kOneClassOnly);
  EXPECT_ERROR_CODE(ComputeEer({}), ErrorCode::kOneClassOnly);
  EXPECT_ERROR_CODE(ComputeEer(Records({NAN}, {1})), ErrorCode::kInvalidArgument);
}

TEST(EerProperty, MatchesMidpointSweepOracle) {
  Gen gen(1);
  for (int trial = 0; trial < 500; ++trial) {
    const int ng = gen.Int(1, 25), nr = gen.Int(1, 25);
    std::vector<double> g, r;
    if (gen.Coin()) {
      g = gen.TiedScores(ng, gen.Int(1, 8));
      r = gen.TiedScores(nr, gen.Int(1, 8));
    } else {
      g = gen.Normals(ng, gen.Uniform(-1, 2));
      r = gen.Normals(nr);
    }
    const double eer = ComputeEer(Records(g, r)).eer;
    EXPECT_NEAR(eer, EerOracle(g, r), 1e-9) << "trial " << trial;
    EXPECT_GE(eer, 0.0);
    EXPECT_LE(eer, 1.0);
  }
}

TEST(EerProperty, MonotoneTransformInvariance) {
  Gen gen(2);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = gen.Normals(gen.Int(1, 30), 0.5);
    auto r = gen.Normals(gen.Int(1, 30));
    const double eer = ComputeEer(Records(g, r)).eer;
    for (double& x : g) x = std::exp(x) * 3 + 1;
    for (double& x : r) x = std::exp(x) * 3 + 1;
    EXPECT_NEAR(ComputeEer(Records(g, r)).eer, eer, 1e-12);
  }
}

TEST(EerProperty, LabelSwapEqualsNegation) {
  Gen gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = gen.TiedScores(gen.Int(1, 20), 6);
    auto r = gen.TiedScores(gen.Int(1, 20), 6);
    const double swapped = ComputeEer(Records(r, g)).eer;
    for (double& x : g) x = -x;
    for (double& x : r) x = -x;
    EXPECT_NEAR(swapped, ComputeEer(Records(g, r)).eer, 1e-12);
  }
}

TEST(EerProperty, ThresholdWithinScoreRange) {
  Gen gen(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = gen.Normals(gen.Int(1, 20), 1);
    const auto r = gen.Normals(gen.Int(1, 20));
    double lo = g[0], hi = g[0];
    for (double x : g) lo = std::min(lo, x), hi = std::max(hi, x);
    for (double x : r) lo = std::min(lo, x), hi = std::max(hi, x);
    const double t = ComputeEer(Records(g, r)).threshold;
    EXPECT_GE(t, lo);
    EXPECT_LE(t, hi);
  }
}

TEST(ScoreFile, RoundTripWithAndWithoutLabels) {
  const auto records = Records({0.125, -3e-7}, {1e300, 42});
  std::vector<bool> labeled{true, false, true, true};
  const std::string text = FormatScores(records, &labeled);
  EXPECT_EQ(text.substr(0, text.find('\n')), "utt_id\tscore\tlabel");
  EXPECT_NE(text.find("g1\t-3e-07\t-\n"), std::string::npos);
  std::vector<bool> flags;
  const auto back = ParseScores(text, &flags);
  ASSERT_EQ(back.size(), 4u);
  EXPECT_EQ(flags, labeled);
  for (size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(back[i].utt_id, records[i].utt_id);
    EXPECT_EQ(back[i].score, records[i].score);
  }
  EXPECT_EQ(back[2].label, Label::kReplay);
  EXPECT_EQ(ParseScores(FormatScores(records)).at(3).label, Label::kReplay);
}

TEST(ScoreFileProperty, ScoresRoundTripBitExactly) {
  Gen gen(5);
  std::vector<ScoreRecord> records;
  for (int i = 0; i < 300; ++i)
    records.push_back({"u" + std::to_string(i),
                       gen.Normal() * std::pow(10.0, gen.Int(-20, 20)),
                       gen.Coin() ? Label::kGenuine : Label::kReplay});
  const auto back = ParseScores(FormatScores(records));
  ASSERT_EQ(back.size(), records.size());
  for (size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].score, records[i].score);
    EXPECT_EQ(back[i].label, records[i].label);
  }
}

TEST(ScoreFile, Malformed) {
  EXPECT_ERROR_CODE(ParseScores("utt_id\tscore\tlabel\nu1\tabc\tgenuine\n"),
                    ErrorCode::kInvalidArgument);
  EXPECT_ERROR_CODE(ParseScores("utt_id\tscore\tlabel\nu1\t1.0\tGenuine\n"),
                    ErrorCode::kUnknownLabel);
}

}  // namespace
}  // namespace replaycm
