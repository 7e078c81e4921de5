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

#include "forge/lora.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "forge/error.h"
#include "forge/rng.h"

namespace forge {
namespace {

std::string Shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void CheckForwardShapes(const Eigen::MatrixXd& w0, const LoraAdapter& adapter,
                        const Eigen::VectorXd& x) {
  adapter.CheckShapes();
  if (w0.rows() != adapter.d() || w0.cols() != adapter.k() ||
      x.size() != w0.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "W0 " + Shape(w0) + ", B " + Shape(adapter.b) + ", A " +
                    Shape(adapter.a) + ", x " + std::to_string(x.size()));
  }
}

}  // namespace

void LoraAdapter::CheckShapes() const {
  if (a.rows() != b.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "A is " + Shape(a) + " but B is " + Shape(b));
  }
}

std::string_view ProjectionName(AttentionProjection projection) {
  switch (projection) {
    case AttentionProjection::kQuery: return "W_q";
    case AttentionProjection::kKey: return "W_k";
    case AttentionProjection::kValue: return "W_v";
    case AttentionProjection::kOutput: return "W_o";
  }
  return "?";
}

LoraAdapter LoraInit(Eigen::Index d, Eigen::Index k, Eigen::Index rank,
                     std::uint64_t seed, double sigma) {
  if (d < 1 || k < 1 || rank < 1) {
    throw Error(ErrorCode::kInvalidArgument, "d, k and rank must be >= 1");
  }
  if (rank > std::min(d, k)) {
    throw Error(ErrorCode::kRankTooLarge,
                "rank " + std::to_string(rank) + " exceeds min(d, k) = " +
                    std::to_string(std::min(d, k)));
  }
  if (!(sigma > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be > 0");
  }
  LoraAdapter adapter;
  adapter.b = Eigen::MatrixXd::Zero(d, rank);
  adapter.a.resize(rank, k);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < rank; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) adapter.a(i, j) = sigma * rng.Normal();
  }
  return adapter;
}

Eigen::VectorXd LoraForward(const Eigen::MatrixXd& w0,
                            const LoraAdapter& adapter,
                            const Eigen::VectorXd& x) {
  CheckForwardShapes(w0, adapter, x);
  const Eigen::VectorXd ax = adapter.a * x;
  Eigen::VectorXd h = w0 * x;
  h.noalias() += adapter.b * ax;
  return h;
}

std::uint64_t LoraParamCount(std::uint64_t d_model, std::uint64_t rank,
                             std::uint64_t n_layers,
                             const std::set<AttentionProjection>& targets) {
  return n_layers * targets.size() * rank * (d_model + d_model);
}

std::uint64_t LoraParamCount(std::uint64_t d_model, std::uint64_t rank,
                             const AdapterTargetSet& targets) {
  return LoraParamCount(d_model, rank, targets.n_layers, targets.targets);
}

double LoraLoss(const Eigen::MatrixXd& w0, const LoraAdapter& adapter,
                const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd h = LoraForward(w0, adapter, x);
  if (y.size() != h.size()) {
    throw Error(ErrorCode::kShapeMismatch, "y has the wrong length");
  }
  return 0.5 * (h - y).squaredNorm();
}

LoraGradients LoraGrad(const Eigen::MatrixXd& w0, const LoraAdapter& adapter,
                       const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd h = LoraForward(w0, adapter, x);
  if (y.size() != h.size()) {
    throw Error(ErrorCode::kShapeMismatch, "y has the wrong length");
  }
  const Eigen::VectorXd residual = h - y;
  LoraGradients g;
  g.a = (adapter.b.transpose() * residual) * x.transpose();
  g.b = residual * (adapter.a * x).transpose();
  return g;
}

double GradCheck(const Eigen::MatrixXd& w0, const LoraAdapter& adapter,
                 const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 double eps) {
  if (!(eps > 0.0 && eps <= 1e-3)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be in (0, 1e-3]");
  }
  const LoraGradients analytic = LoraGrad(w0, adapter, x, y);
  LoraAdapter probe = adapter;
  double worst = 0.0;
  auto compare = [&](double exact, double numeric) {
    const double scale = std::max({std::abs(exact), std::abs(numeric), 1e-7});
    worst = std::max(worst, std::abs(exact - numeric) / scale);
  };
  auto sweep = [&](Eigen::MatrixXd& param, const Eigen::MatrixXd& grad) {
    for (Eigen::Index i = 0; i < param.rows(); ++i) {
      for (Eigen::Index j = 0; j < param.cols(); ++j) {
        const double saved = param(i, j);
        param(i, j) = saved + eps;
        const double up = LoraLoss(w0, probe, x, y);
        param(i, j) = saved - eps;
        const double down = LoraLoss(w0, probe, x, y);
        param(i, j) = saved;
        compare(grad(i, j), (up - down) / (2.0 * eps));
      }
    }
  };
  sweep(probe.a, analytic.a);
  sweep(probe.b, analytic.b);
  return worst;
}

FitResult AdapterFitToy(const Eigen::MatrixXd& w0, const Eigen::MatrixXd& target,
                        Eigen::Index rank, int steps, double lr,
                        std::uint64_t seed, double sigma) {
  if (w0.rows() != target.rows() || w0.cols() != target.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                "W0 " + Shape(w0) + " vs target " + Shape(target));
  }
  if (!(lr > 0.0) || steps < 0) {
    throw Error(ErrorCode::kInvalidArgument, "lr must be > 0 and steps >= 0");
  }
  FitResult fit;
  fit.adapter = LoraInit(w0.rows(), w0.cols(), rank, seed, sigma);
  LoraAdapter& ad = fit.adapter;
  const Eigen::MatrixXd delta = target - w0;

  auto loss_of = [&](const Eigen::MatrixXd& residual) {
    return 0.5 * residual.squaredNorm();
  };
  Eigen::MatrixXd residual = ad.b * ad.a - delta;
  fit.losses.push_back(loss_of(residual));
  int growth_streak = 0;
  for (int step = 0; step < steps; ++step) {
    const Eigen::MatrixXd grad_b = residual * ad.a.transpose();
    const Eigen::MatrixXd grad_a = ad.b.transpose() * residual;
    ad.b -= lr * grad_b;
    ad.a -= lr * grad_a;
    residual = ad.b * ad.a - delta;
    const double loss = loss_of(residual);
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergence,
                  "loss became non-finite at step " + std::to_string(step + 1));
    }
    growth_streak = loss > fit.losses.back() ? growth_streak + 1 : 0;
    fit.losses.push_back(loss);
    if (growth_streak >= 10) {
      throw Error(ErrorCode::kDivergence,
                  "loss grew for 10 consecutive steps (step " +
                      std::to_string(step + 1) + ")");
    }
  }
  return fit;
}

}  // namespace forge
