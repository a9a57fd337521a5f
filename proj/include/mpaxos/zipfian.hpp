// Copyright 2026 The mpaxos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace mpaxos {

// Zipfian ranks in [0, n) following Gray et al., "Quickly Generating
// Billion-Record Synthetic Databases". Rank 0 is the most popular.
class ZipfianGenerator {
 public:
  ZipfianGenerator(std::uint64_t n, double theta);

  template <typename Rng>
  std::uint64_t operator()(Rng& rng) {
    return sample(std::uniform_real_distribution<double>(0.0, 1.0)(rng));
  }

  // Maps a uniform draw u in [0, 1) to a rank.
  std::uint64_t sample(double u) const;

  std::uint64_t n() const { return n_; }
  double theta() const { return theta_; }
  // Probability of rank i under the exact distribution.
  double probability(std::uint64_t i) const;

 private:
  std::uint64_t n_;
  double theta_;
  double zetan_;
  double alpha_;
  double eta_;
};

}  // namespace mpaxos
