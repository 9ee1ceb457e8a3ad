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

#include "mobilecs/ie/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mobilecs::ie {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(const double* x, int n) {
  double hi = kNegInf;
  for (int i = 0; i < n; ++i) hi = std::max(hi, x[i]);
  if (hi == kNegInf) return kNegInf;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::exp(x[i] - hi);
  return hi + std::log(s);
}

double Trans(const Matrix& transitions, const TransitionMask& mask, int i, int j) {
  return mask.Allowed(i, j) ? transitions.at(i, j) : kNegInf;
}

void CheckShapes(const Matrix& e, const Matrix& t, const TransitionMask& m) {
  if (e.cols != t.rows || t.rows != t.cols || m.labels != t.rows) {
    throw std::invalid_argument("crf shape mismatch");
  }
}

// alpha(t, j): log-sum of prefix scores ending in j at t.
Matrix Forward(const Matrix& e, const Matrix& tr, const TransitionMask& mask) {
  const int T = e.rows, L = e.cols;
  Matrix alpha(T, L, kNegInf);
  for (int j = 0; j < L; ++j) alpha.at(0, j) = mask.Start(j) ? e.at(0, j) : kNegInf;
  std::vector<double> buf(L);
  for (int t = 1; t < T; ++t) {
    for (int j = 0; j < L; ++j) {
      for (int i = 0; i < L; ++i) buf[i] = alpha.at(t - 1, i) + Trans(tr, mask, i, j);
      alpha.at(t, j) = LogSumExp(buf.data(), L) + e.at(t, j);
    }
  }
  return alpha;
}

// beta(t, i): log-sum of suffix scores after position t given label i at t.
Matrix Backward(const Matrix& e, const Matrix& tr, const TransitionMask& mask) {
  const int T = e.rows, L = e.cols;
  Matrix beta(T, L, kNegInf);
  for (int j = 0; j < L; ++j) beta.at(T - 1, j) = 0.0;
  std::vector<double> buf(L);
  for (int t = T - 2; t >= 0; --t) {
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) buf[j] = Trans(tr, mask, i, j) + e.at(t + 1, j) + beta.at(t + 1, j);
      beta.at(t, i) = LogSumExp(buf.data(), L);
    }
  }
  return beta;
}

}  // namespace

BioLabels::BioLabels(std::vector<std::string> types) : types_(std::move(types)) {}

int BioLabels::TypeIndex(const std::string& type) const {
  auto it = std::find(types_.begin(), types_.end(), type);
  return it == types_.end() ? -1 : static_cast<int>(it - types_.begin());
}

std::string BioLabels::Name(int label) const {
  if (label == 0) return "O";
  return (IsInside(label) ? "I-" : "B-") + types_.at(TypeOf(label));
}

TransitionMask TransitionMask::None(int labels) {
  TransitionMask m;
  m.labels = labels;
  m.allowed.assign(static_cast<std::size_t>(labels) * labels, 1);
  m.start.assign(labels, 1);
  return m;
}

TransitionMask TransitionMask::Bio(int labels) {
  TransitionMask m = None(labels);
  for (int j = 0; j < labels; ++j) {
    if (!BioLabels::IsInside(j)) continue;
    m.start[j] = 0;
    const int type = BioLabels::TypeOf(j);
    for (int i = 0; i < labels; ++i) {
      const bool ok = i != 0 && BioLabels::TypeOf(i) == type;
      m.allowed[static_cast<std::size_t>(i) * labels + j] = ok ? 1 : 0;
    }
  }
  return m;
}

std::vector<int> SpansToBio(int length, const std::vector<LabeledSpan>& spans) {
  std::vector<int> labels(length, 0);
  for (const LabeledSpan& s : spans) {
    if (s.start < 0 || s.end > length || s.start >= s.end) {
      throw std::invalid_argument("span outside sequence");
    }
    for (int t = s.start; t < s.end; ++t) {
      if (labels[t] != 0) throw std::invalid_argument("overlapping spans cannot be BIO-encoded");
      labels[t] = t == s.start ? BioLabels::B(s.type) : BioLabels::I(s.type);
    }
  }
  return labels;
}

std::vector<LabeledSpan> BioToSpans(const std::vector<int>& labels) {
  std::vector<LabeledSpan> out;
  const int n = static_cast<int>(labels.size());
  for (int t = 0; t < n;) {
    const int l = labels[t];
    if (l == 0) {
      ++t;
      continue;
    }
    // A stray I-x opens a span too, so malformed input still yields spans.
    const int type = BioLabels::TypeOf(l);
    int end = t + 1;
    while (end < n && labels[end] == BioLabels::I(type)) ++end;
    out.push_back({t, end, type});
    t = end;
  }
  return out;
}

double PathScore(const Matrix& emissions, const Matrix& transitions, const TransitionMask& mask,
                 const std::vector<int>& path) {
  CheckShapes(emissions, transitions, mask);
  if (static_cast<int>(path.size()) != emissions.rows) throw std::invalid_argument("path length");
  if (path.empty()) return 0.0;
  if (!mask.Start(path[0])) return kNegInf;
  double s = emissions.at(0, path[0]);
  for (std::size_t t = 1; t < path.size(); ++t) {
    s += Trans(transitions, mask, path[t - 1], path[t]) + emissions.at(static_cast<int>(t), path[t]);
  }
  return s;
}

std::vector<int> ViterbiDecode(const Matrix& e, const Matrix& tr, const TransitionMask& mask) {
  CheckShapes(e, tr, mask);
  const int T = e.rows, L = e.cols;
  if (T == 0) return {};
  Matrix delta(T, L, kNegInf);
  std::vector<int> back(static_cast<std::size_t>(T) * L, 0);
  for (int j = 0; j < L; ++j) delta.at(0, j) = mask.Start(j) ? e.at(0, j) : kNegInf;
  for (int t = 1; t < T; ++t) {
    for (int j = 0; j < L; ++j) {
      double best = kNegInf;
      int arg = 0;
      for (int i = 0; i < L; ++i) {
        const double s = delta.at(t - 1, i) + Trans(tr, mask, i, j);
        if (s > best) {  // strict: the smallest index keeps ties
          best = s;
          arg = i;
        }
      }
      delta.at(t, j) = best + e.at(t, j);
      back[static_cast<std::size_t>(t) * L + j] = arg;
    }
  }
  int last = 0;
  for (int j = 1; j < L; ++j) {
    if (delta.at(T - 1, j) > delta.at(T - 1, last)) last = j;
  }
  std::vector<int> path(T);
  path[T - 1] = last;
  for (int t = T - 1; t > 0; --t) path[t - 1] = back[static_cast<std::size_t>(t) * L + path[t]];
  return path;
}

double LogPartition(const Matrix& e, const Matrix& tr, const TransitionMask& mask) {
  CheckShapes(e, tr, mask);
  if (e.rows == 0) return 0.0;
  const Matrix alpha = Forward(e, tr, mask);
  return LogSumExp(alpha.row(e.rows - 1), e.cols);
}

CrfLoss CrfNll(const Matrix& e, const Matrix& tr, const TransitionMask& mask, const std::vector<int>& gold) {
  CheckShapes(e, tr, mask);
  const int T = e.rows, L = e.cols;
  CrfLoss out;
  out.d_emissions = Matrix(T, L);
  out.d_transitions = Matrix(L, L);
  if (T == 0) return out;
  const Matrix alpha = Forward(e, tr, mask);
  const Matrix beta = Backward(e, tr, mask);
  const double log_z = LogSumExp(alpha.row(T - 1), L);
  out.loss = log_z - PathScore(e, tr, mask, gold);

  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < L; ++j) {
      const double lp = alpha.at(t, j) + beta.at(t, j) - log_z;
      out.d_emissions.at(t, j) = lp == kNegInf ? 0.0 : std::exp(lp);
    }
    out.d_emissions.at(t, gold[t]) -= 1.0;
  }
  for (int t = 1; t < T; ++t) {
    for (int i = 0; i < L; ++i) {
      if (alpha.at(t - 1, i) == kNegInf) continue;
      for (int j = 0; j < L; ++j) {
        if (!mask.Allowed(i, j)) continue;
        const double lp = alpha.at(t - 1, i) + tr.at(i, j) + e.at(t, j) + beta.at(t, j) - log_z;
        out.d_transitions.at(i, j) += std::exp(lp);
      }
    }
    out.d_transitions.at(gold[t - 1], gold[t]) -= 1.0;
  }
  return out;
}

}  // namespace mobilecs::ie
