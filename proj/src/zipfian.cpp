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

#include "mpaxos/zipfian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpaxos {

namespace {

double zeta(std::uint64_t n, double theta) {
  double sum = 0;
  for (std::uint64_t i = 1; i <= n; ++i) sum += 1.0 / std::pow(static_cast<double>(i), theta);
  return sum;
}

}  // namespace

ZipfianGenerator::ZipfianGenerator(std::uint64_t n, double theta) : n_(n), theta_(theta) {
  if (n < 1) throw std::invalid_argument("zipfian: n must be >= 1");
  if (!(theta > 0.0) || theta == 1.0) throw std::invalid_argument("zipfian: theta must be > 0 and != 1");
  zetan_ = zeta(n, theta);
  const double zeta2 = zeta(std::min<std::uint64_t>(n, 2), theta);
  alpha_ = 1.0 / (1.0 - theta);
  // With a single rank sample() never reaches the eta branch.
  eta_ = n < 2 ? 0.0
               : (1.0 - std::pow(2.0 / static_cast<double>(n), 1.0 - theta)) / (1.0 - zeta2 / zetan_);
}

std::uint64_t ZipfianGenerator::sample(double u) const {
  const double uz = u * zetan_;
  if (uz < 1.0) return 0;
  if (n_ >= 2 && uz < 1.0 + std::pow(0.5, theta_)) return 1;
  const auto rank = static_cast<std::uint64_t>(static_cast<double>(n_) *
                                               std::pow(eta_ * u - eta_ + 1.0, alpha_));
  return std::min(rank, n_ - 1);
}

double ZipfianGenerator::probability(std::uint64_t i) const {
  if (i >= n_) return 0.0;
  return 1.0 / std::pow(static_cast<double>(i + 1), theta_) / zetan_;
}

}  // namespace mpaxos
