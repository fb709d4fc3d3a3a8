// Copyright 2026 The Phonoloop Authors
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

#include "phonoloop/recognizer/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace phonoloop {

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity(); }

// Reference implementation in the log domain; only used when the scaled
// linear pass underflows.
double log_domain(const Pronunciation& observed, const Pronunciation& ref, const ConfusionMatrix& matrix,
                  double delta, double iota) {
  const std::size_t m = observed.size();
  const double log_del = safe_log(delta);
  const double log_keep = safe_log(1.0 - delta);
  const double log_ins = safe_log(iota / static_cast<double>(matrix.size()));
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> prev(m + 1, ninf);
  std::vector<double> cur(m + 1, ninf);
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + log_ins;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = prev[0] + log_del;
    for (std::size_t j = 1; j <= m; ++j) {
      double v = prev[j] + log_del;
      v = log_add(v, prev[j - 1] + log_keep + safe_log(matrix(ref[i - 1], observed[j - 1])));
      v = log_add(v, cur[j - 1] + log_ins);
      cur[j] = v;
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

}  // namespace

double segment_likelihood(const Pronunciation& observed, const Pronunciation& ref, const ConfusionMatrix& matrix,
                          double delta, double iota) {
  const std::size_t m = observed.size();
  const double keep = 1.0 - delta;
  const double ins = iota / static_cast<double>(matrix.size());

  // Linear-domain forward pass, rescaled by each row's maximum.
  thread_local std::vector<double> prev;
  thread_local std::vector<double> cur;
  prev.assign(m + 1, 0.0);
  cur.assign(m + 1, 0.0);
  prev[0] = 1.0;
  for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] * ins;
  double log_scale = 0.0;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    const std::size_t from = ref[i - 1].index();
    const auto row = matrix.row(from);
    cur[0] = prev[0] * delta;
    double peak = cur[0];
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = prev[j] * delta + prev[j - 1] * keep * row[observed[j - 1].index()] + cur[j - 1] * ins;
      peak = std::max(peak, cur[j]);
    }
    if (!(peak > 0.0)) {
      return log_domain(observed, ref, matrix, delta, iota);
    }
    const double inv = 1.0 / peak;
    for (auto& v : cur) v *= inv;
    log_scale += std::log(peak);
    std::swap(prev, cur);
  }
  const double tail = prev[m];
  if (!(tail > 0.0) || !std::isfinite(tail)) return log_domain(observed, ref, matrix, delta, iota);
  return std::log(tail) + log_scale;
}

}  // namespace phonoloop
