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

#include "phonoloop/phoneme_core/alignment.hpp"

#include <sstream>

#include "phonoloop/error.hpp"

namespace phonoloop {

WerResult word_error_rate(std::span<const std::string> ref, std::span<const std::string> hyp) {
  if (ref.empty()) throw Error(ErrorCode::kEmptyReference, "WER needs a non-empty reference");
  const auto a = align_sequences(ref, hyp);
  WerResult r;
  r.substitutions = a.substitutions;
  r.deletions = a.deletions;
  r.insertions = a.insertions;
  r.ref_length = a.ref_length;
  r.wer = static_cast<double>(a.distance()) / static_cast<double>(a.ref_length);
  return r;
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

}  // namespace phonoloop
