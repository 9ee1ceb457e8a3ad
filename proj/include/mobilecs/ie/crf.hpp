// Copyright 2026 The MobileCS Toolkit Authors.
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

#pragma once

// Linear-chain CRF over BIO labels: Viterbi decoding, the log-partition
// function and the negative log-likelihood with its gradients.

#include <string>
#include <vector>

#include "mobilecs/ie/tensor.hpp"

namespace mobilecs::ie {

// Label 0 is O; type k has B = 1 + 2k and I = 2 + 2k.
class BioLabels {
 public:
  BioLabels() = default;
  explicit BioLabels(std::vector<std::string> types);

  int size() const { return 1 + 2 * static_cast<int>(types_.size()); }
  const std::vector<std::string>& types() const { return types_; }
  int TypeIndex(const std::string& type) const;  // -1 when unknown
  static int B(int type) { return 1 + 2 * type; }
  static int I(int type) { return 2 + 2 * type; }
  static bool IsInside(int label) { return label > 0 && label % 2 == 0; }
  static int TypeOf(int label) { return (label - 1) / 2; }
  std::string Name(int label) const;

 private:
  std::vector<std::string> types_;
};

// allowed(i, j): label j may follow label i; start(j): j may open a sequence.
struct TransitionMask {
  int labels = 0;
  std::vector<char> allowed;
  std::vector<char> start;

  bool Allowed(int from, int to) const { return allowed[static_cast<std::size_t>(from) * labels + to] != 0; }
  bool Start(int label) const { return start[label] != 0; }

  static TransitionMask None(int labels);
  // I-x only after B-x or I-x, never first.
  static TransitionMask Bio(int labels);
};

// Labeled segment [start, end) with its type index.
struct LabeledSpan {
  int start = 0;
  int end = 0;
  int type = 0;

  auto operator<=>(const LabeledSpan&) const = default;
};

std::vector<int> SpansToBio(int length, const std::vector<LabeledSpan>& spans);
std::vector<LabeledSpan> BioToSpans(const std::vector<int>& labels);

// Sum of emission and transition scores along `path`; -inf if masked.
double PathScore(const Matrix& emissions, const Matrix& transitions, const TransitionMask& mask,
                 const std::vector<int>& path);

// Highest-scoring path. Among equal scores the path with the smaller label at
// the latest position where candidates differ wins.
std::vector<int> ViterbiDecode(const Matrix& emissions, const Matrix& transitions,
                               const TransitionMask& mask);

double LogPartition(const Matrix& emissions, const Matrix& transitions, const TransitionMask& mask);

struct CrfLoss {
  double loss = 0.0;  // log Z - score(gold)
  Matrix d_emissions;
  Matrix d_transitions;  // zero at masked entries
};

CrfLoss CrfNll(const Matrix& emissions, const Matrix& transitions, const TransitionMask& mask,
               const std::vector<int>& gold);

}  // namespace mobilecs::ie
