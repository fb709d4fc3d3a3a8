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

#pragma once

#include "phonoloop/phoneme_core/inventory.hpp"
#include "phonoloop/recognizer/confusion.hpp"

namespace phonoloop {

// Log of the total mass of every edit path that turns `ref` into `observed`:
// a reference phoneme is deleted with probability delta or emitted through
// `matrix` with probability 1 - delta, and each spurious observed phoneme
// costs iota / P. Finite whenever delta > 0 and iota > 0.
double segment_likelihood(const Pronunciation& observed, const Pronunciation& ref,
                          const ConfusionMatrix& matrix, double delta, double iota);

}  // namespace phonoloop
