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

#include "phonoloop/recognizer/model.hpp"

#include <cmath>
#include <numeric>

#include <boost/random/gamma_distribution.hpp>

#include "phonoloop/error.hpp"
#include "phonoloop/phoneme_core/alignment.hpp"
#include "phonoloop/random.hpp"

namespace phonoloop {

namespace {

constexpr std::uint64_t kSampleTag = 0x5a3d1e0f00000001ULL;

std::vector<double> prior_alpha(std::size_t p, const ModelParams& params) {
  std::vector<double> alpha(p * p, params.prior_other);
  for (std::size_t i = 0; i < p; ++i) alpha[i * p + i] = params.prior_self;
  return alpha;
}

void check_params(const ModelParams& params) {
  if (!(params.delta >= 0.0 && params.delta <= 0.5)) throw Error(ErrorCode::kBadConfig, "delta outside [0, 0.5]");
  if (!(params.iota >= 0.0 && params.iota <= 0.2)) throw Error(ErrorCode::kBadConfig, "iota outside [0, 0.2]");
  if (!(params.prior_self > 0.0) || !(params.prior_other > 0.0)) {
    throw Error(ErrorCode::kBadConfig, "Dirichlet prior must be positive");
  }
}

}  // namespace

AdaptiveModel::AdaptiveModel(PhonemeInventory inventory, ModelParams params)
    : inventory_(std::move(inventory)), params_(params) {
  check_params(params_);
  alpha_ = prior_alpha(inventory_.size(), params_);
}

void AdaptiveModel::add_count(Phoneme from, Phoneme to, double amount) {
  alpha_[from.index() * size() + to.index()] += amount;
}

void AdaptiveModel::set_lexical_prior(const std::string& word, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw Error(ErrorCode::kBadConfig, "bad lexical weight");
  lexical_prior_[fold_case(word)] = weight;
}

double AdaptiveModel::lexical_weight(const LexiconEntry& entry) const {
  auto it = lexical_prior_.find(fold_case(entry.word));
  return it == lexical_prior_.end() ? entry.weight : it->second;
}

void AdaptiveModel::set_alpha(std::vector<double> values) {
  if (values.size() != size() * size()) throw Error(ErrorCode::kParseError, "alpha shape mismatch");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::kParseError, "alpha entries must be positive");
  }
  alpha_ = std::move(values);
}

bool AdaptiveModel::is_prior() const { return alpha_ == prior_alpha(size(), params_); }

void AdaptiveModel::reset_alpha() { alpha_ = prior_alpha(size(), params_); }

ConfusionMatrix expected_confusion(const AdaptiveModel& model) {
  const std::size_t p = model.size();
  std::vector<double> values(p * p);
  for (std::size_t r = 0; r < p; ++r) {
    const auto row = model.alpha_row(r);
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    for (std::size_t q = 0; q < p; ++q) values[r * p + q] = row[q] / total;
  }
  return ConfusionMatrix(p, std::move(values));
}

ConfusionMatrix sample_confusion(const AdaptiveModel& model, std::uint64_t nonce) {
  const std::size_t p = model.size();
  Rng rng(derive_seed(kSampleTag, nonce));
  std::vector<double> values(p * p);
  for (std::size_t r = 0; r < p; ++r) {
    const auto row = model.alpha_row(r);
    double total = 0.0;
    for (std::size_t q = 0; q < p; ++q) {
      boost::random::gamma_distribution<double> gamma(row[q], 1.0);
      values[r * p + q] = gamma(rng);
      total += values[r * p + q];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
      // Every draw underflowed; fall back to the row mean.
      total = std::accumulate(row.begin(), row.end(), 0.0);
      for (std::size_t q = 0; q < p; ++q) values[r * p + q] = row[q] / total;
      continue;
    }
    for (std::size_t q = 0; q < p; ++q) values[r * p + q] /= total;
  }
  return ConfusionMatrix(p, std::move(values));
}

AdaptiveModel update_from_correction(AdaptiveModel model, std::string_view ref_word,
                                     const Pronunciation& observed, const Lexicon& lexicon) {
  const auto& pron = phonemes_of(ref_word, lexicon);
  const auto alignment = align_sequences(pron, observed);
  for (const auto& op : alignment.ops) {
    if (op.kind == EditKind::kMatch || op.kind == EditKind::kSubstitute) {
      model.add_count(pron[op.ref_pos], observed[op.hyp_pos]);
    }
  }
  return model;
}

AdaptiveModel reset_acoustic(AdaptiveModel model) {
  model.reset_alpha();
  return model;
}

nlohmann::json model_to_json(const AdaptiveModel& model) {
  nlohmann::json alpha = nlohmann::json::array();
  for (std::size_t r = 0; r < model.size(); ++r) {
    const auto row = model.alpha_row(r);
    alpha.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {
      {"inventory", model.inventory().symbols()},
      {"alpha", std::move(alpha)},
      {"delta", model.params().delta},
      {"iota", model.params().iota},
      {"prior_self", model.params().prior_self},
      {"prior_other", model.params().prior_other},
      {"lexical_prior", model.lexical_prior()},
  };
}

AdaptiveModel model_from_json(const nlohmann::json& j) {
  try {
    ModelParams params;
    params.delta = j.at("delta").get<double>();
    params.iota = j.at("iota").get<double>();
    params.prior_self = j.value("prior_self", params.prior_self);
    params.prior_other = j.value("prior_other", params.prior_other);
    AdaptiveModel model(PhonemeInventory(j.at("inventory").get<std::vector<std::string>>()), params);
    const auto& alpha = j.at("alpha");
    if (alpha.size() != model.size()) throw Error(ErrorCode::kParseError, "alpha row count mismatch");
    std::vector<double> values;
    values.reserve(model.size() * model.size());
    for (std::size_t r = 0; r < model.size(); ++r) {
      const auto row = alpha.at(r).get<std::vector<double>>();
      if (row.size() != model.size()) throw Error(ErrorCode::kParseError, "alpha column count mismatch");
      values.insert(values.end(), row.begin(), row.end());
    }
    model.set_alpha(std::move(values));
    if (j.contains("lexical_prior")) {
      for (const auto& [word, weight] : j.at("lexical_prior").items()) {
        model.set_lexical_prior(word, weight.get<double>());
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("model snapshot: ") + e.what());
  }
}

}  // namespace phonoloop
