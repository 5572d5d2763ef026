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


#include "core/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "core/error.hpp"
#include "core/format.hpp"

namespace replaycm {

EerResult ComputeEer(const std::vector<ScoreRecord>& records) {
  std::vector<double> genuine, replay;
  for (const auto& r : records) {
    if (!std::isfinite(r.score))
      Fail(ErrorCode::kInvalidArgument, "non-finite score for '" + r.utt_id + "'");
    (r.label == Label::kGenuine ? genuine : replay).push_back(r.score);
  }
  if (genuine.empty() || replay.empty())
    Fail(ErrorCode::kOneClassOnly,
         "EER needs both classes (genuine=" + std::to_string(genuine.size()) +
             ", replay=" + std::to_string(replay.size()) + ")");
  std::sort(genuine.begin(), genuine.end());
  std::sort(replay.begin(), replay.end());

  std::vector<double> thresholds;
  thresholds.reserve(genuine.size() + replay.size());
  std::merge(genuine.begin(), genuine.end(), replay.begin(), replay.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double ng = static_cast<double>(genuine.size());
  const double nr = static_cast<double>(replay.size());
  auto far_at = [&](size_t j) {
    if (j == thresholds.size()) return 0.0;
    const auto it =
        std::lower_bound(replay.begin(), replay.end(), thresholds[j]);
    return static_cast<double>(replay.end() - it) / nr;
  };
  auto frr_at = [&](size_t j) {
    if (j == thresholds.size()) return 1.0;
    const auto it =
        std::lower_bound(genuine.begin(), genuine.end(), thresholds[j]);
    return static_cast<double>(it - genuine.begin()) / ng;
  };

  // FAR - FRR starts at 1 (lowest score) and ends at -1 (past the top).
  double far0 = far_at(0), frr0 = frr_at(0);
  for (size_t j = 0; j < thresholds.size(); ++j) {
    const double far1 = far_at(j + 1), frr1 = frr_at(j + 1);
    const double d0 = far0 - frr0, d1 = far1 - frr1;
    if (d0 == 0.0) return {far0, thresholds[j]};
    if (d1 <= 0.0) {
      const double alpha = d0 / (d0 - d1);
      const double t1 =
          j + 1 < thresholds.size() ? thresholds[j + 1] : thresholds[j];
      return {far0 + alpha * (far1 - far0),
              thresholds[j] + alpha * (t1 - thresholds[j])};
    }
    far0 = far1;
    frr0 = frr1;
  }
  return {far0, thresholds.back()};  // unreachable: the sweep ends at -1
}

std::string FormatScores(const std::vector<ScoreRecord>& records,
                         const std::vector<bool>* labeled) {
  std::string out = "utt_id\tscore\tlabel\n";
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const bool known = !labeled || (i < labeled->size() && (*labeled)[i]);
    out += r.utt_id + '\t' + FormatDouble(r.score) + '\t' +
           (known ? LabelName(r.label) : "-") + '\n';
  }
  return out;
}

std::vector<ScoreRecord> ParseScores(std::string_view text,
                                     std::vector<bool>* labeled) {
  std::vector<ScoreRecord> out;
  if (labeled) labeled->clear();
  size_t start = 0;
  bool header = true;
  int line_no = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.starts_with("utt_id\t")) continue;
    }
    const size_t t1 = line.find('\t');
    const size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos)
      Fail(ErrorCode::kMissingColumn,
           "score line " + std::to_string(line_no) + " needs 3 columns");
    ScoreRecord r;
    r.utt_id = line.substr(0, t1);
    const std::string_view num = line.substr(t1 + 1, t2 - t1 - 1);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), r.score);
    if (ec != std::errc() || ptr != num.data() + num.size())
      Fail(ErrorCode::kInvalidArgument,
           "bad score '" + std::string(num) + "' on line " +
               std::to_string(line_no));
    const std::string_view lab = line.substr(t2 + 1);
    const bool known = lab != "-";
    r.label = known ? ParseLabel(lab) : Label::kGenuine;
    if (labeled) labeled->push_back(known);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace replaycm
