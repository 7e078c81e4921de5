// Copyright 2026 The Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FORGE_LORA_H_
#define FORGE_LORA_H_

#include <cstdint>
#include <set>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace forge {

// Low-rank update for one frozen d x k weight: W0 + B * A.
struct LoraAdapter {
  Eigen::MatrixXd a;  // r x k, Gaussian at init
  Eigen::MatrixXd b;  // d x r, zero at init

  Eigen::Index d() const { return b.rows(); }
  Eigen::Index k() const { return a.cols(); }
  Eigen::Index rank() const { return a.rows(); }

  // Throws kShapeMismatch when A and B disagree on the rank.
  void CheckShapes() const;
};

enum class AttentionProjection : std::uint8_t { kQuery, kKey, kValue, kOutput };

std::string_view ProjectionName(AttentionProjection projection);

// Attention projections that carry adapters, repeated over n_layers.
struct AdapterTargetSet {
  std::set<AttentionProjection> targets = {
      AttentionProjection::kQuery, AttentionProjection::kKey,
      AttentionProjection::kValue, AttentionProjection::kOutput};
  std::uint64_t n_layers = 0;
};

// B = 0 exactly; A entries drawn from N(0, sigma^2) by a seeded generator.
// Throws kRankTooLarge when rank > min(d, k) and kInvalidArgument for
// rank < 1 or sigma <= 0.
LoraAdapter LoraInit(Eigen::Index d, Eigen::Index k, Eigen::Index rank,
                     std::uint64_t seed, double sigma = 0.02);

// h = W0 x + B (A x), associated through the rank-r intermediate. W0 is only
// read. Throws kShapeMismatch.
Eigen::VectorXd LoraForward(const Eigen::MatrixXd& w0,
                            const LoraAdapter& adapter,
                            const Eigen::VectorXd& x);

// Trainable parameters with square d_model x d_model projections:
// n_layers * |targets| * rank * (d_model + d_model).
std::uint64_t LoraParamCount(std::uint64_t d_model, std::uint64_t rank,
                             std::uint64_t n_layers,
                             const std::set<AttentionProjection>& targets);
std::uint64_t LoraParamCount(std::uint64_t d_model, std::uint64_t rank,
                             const AdapterTargetSet& targets);

struct LoraGradients {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
};

// loss = 1/2 ||h - y||^2 with h from LoraForward.
double LoraLoss(const Eigen::MatrixXd& w0, const LoraAdapter& adapter,
                const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// dL/dA = B^T (h - y) x^T,  dL/dB = (h - y) (A x)^T.
LoraGradients LoraGrad(const Eigen::MatrixXd& w0, const LoraAdapter& adapter,
                       const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Largest entrywise relative error between LoraGrad and central finite
// differences with step eps in (0, 1e-3]. Entries smaller than 1e-7 in both
// estimates are compared on an absolute scale of 1e-7.
double GradCheck(const Eigen::MatrixXd& w0, const LoraAdapter& adapter,
                 const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 double eps);

struct FitResult {
  LoraAdapter adapter;
  // losses[0] is the loss before the first update; one entry per step after.
  std::vector<double> losses;
};

// Plain gradient descent on 1/2 ||(W0 + B A) - target||_F^2, touching only
// A and B. Throws kDivergence when the loss is non-finite or grows for 10
// consecutive steps.
FitResult AdapterFitToy(const Eigen::MatrixXd& w0, const Eigen::MatrixXd& target,
                        Eigen::Index rank, int steps, double lr,
                        std::uint64_t seed, double sigma = 0.02);

}  // namespace forge

#endif  // FORGE_LORA_H_
