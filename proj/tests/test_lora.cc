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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "doctest.h"
#include "forge/error.h"
#include "forge/lora.h"
#include "oracles.h"

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using forge::AttentionProjection;

MatrixXd Random(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(gen);
  }
  return m;
}

oracle::Matrix ToRows(const MatrixXd& m) {
  oracle::Matrix out(static_cast<std::size_t>(m.rows()),
                     oracle::Vector(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

oracle::Vector ToVec(const VectorXd& v) { return oracle::Vector(v.data(), v.data() + v.size()); }

std::string Bytes(const MatrixXd& m) {
  return std::string(reinterpret_cast<const char*>(m.data()), sizeof(double) * m.size());
}

forge::ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const forge::Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return forge::ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_SUITE("lora") {
  TEST_CASE("init leaves B at zero and is seeded") {
    for (auto [d, k, r] : std::initializer_list<std::tuple<int, int, int>>{{8, 8, 2}, {16, 4, 4}, {3, 7, 1}}) {
      auto ad = forge::LoraInit(d, k, r, 42);
      CHECK(ad.b.rows() == d);
      CHECK(ad.b.cols() == r);
      CHECK(ad.a.rows() == r);
      CHECK(ad.a.cols() == k);
      CHECK(ad.b.isZero(0.0));
      CHECK(ad.a == forge::LoraInit(d, k, r, 42).a);
      CHECK(ad.a != forge::LoraInit(d, k, r, 43).a);
    }
    CHECK(CodeOf([] { forge::LoraInit(4, 6, 5, 1); }) == forge::ErrorCode::kRankTooLarge);
    CHECK(CodeOf([] { forge::LoraInit(4, 6, 0, 1); }) == forge::ErrorCode::kInvalidArgument);
    CHECK(CodeOf([] { forge::LoraInit(4, 6, 2, 1, 0.0); }) == forge::ErrorCode::kInvalidArgument);
  }

  TEST_CASE("A moments sit inside three-sigma bands over redraws") {
    // Each redraw gives 16 entries; 10^4 redraws give n = 160000 samples.
    const double sigma = 0.02;
    double sum = 0, sum_sq = 0;
    std::size_t n = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
      auto ad = forge::LoraInit(8, 8, 2, seed, sigma);
      for (Eigen::Index i = 0; i < ad.a.size(); ++i) {
        sum += ad.a.data()[i];
        sum_sq += ad.a.data()[i] * ad.a.data()[i];
        ++n;
      }
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    const double s2 = sigma * sigma;
    CHECK(std::abs(mean) <= 3.0 * sigma / std::sqrt(double(n)));
    // Var of the sample variance for a Gaussian is 2 s^4 / n.
    CHECK(std::abs(var - s2) <= 3.0 * s2 * std::sqrt(2.0 / n));
  }

  TEST_CASE("forward with fresh adapter equals the base product") {
    std::mt19937_64 gen(3);
    MatrixXd w0(2, 3);
    w0 << 1, 2, 3, 4, 5, 6;
    VectorXd x(3);
    x << 1, -1, 2;
    auto ad = forge::LoraInit(2, 3, 2, 9);
    CHECK(forge::LoraForward(w0, ad, x) == w0 * x);
    CHECK(forge::LoraForward(w0, ad, VectorXd::Zero(3)).isZero(0.0));
    ad.b = Random(gen, 2, 2);
    CHECK(forge::LoraForward(w0, ad, VectorXd::Zero(3)).isZero(0.0));
  }

  TEST_CASE("small integer case matches the dense oracle") {
    MatrixXd w0(3, 3);
    w0 << 1, 0, 2, -1, 3, 1, 0, 1, 1;
    forge::LoraAdapter ad;
    ad.b = MatrixXd(3, 1);
    ad.b << 1, 2, -1;
    ad.a = MatrixXd(1, 3);
    ad.a << 2, 0, 1;
    VectorXd x(3);
    x << 1, 2, 3;
    const auto h = forge::LoraForward(w0, ad, x);
    const auto want = oracle::DenseLora(ToRows(w0), ToRows(ad.b), ToRows(ad.a), ToVec(x));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(h(i) - want[i]) <= 1e-12);
  }

  TEST_CASE("random shapes match the dense oracle") {
    std::mt19937_64 gen(11);
    for (int t = 0; t < 200; ++t) {
      const int d = 1 + static_cast<int>(gen() % 64);
      const int k = 1 + static_cast<int>(gen() % 64);
      const int r = 1 + static_cast<int>(gen() % std::min(d, k));
      forge::LoraAdapter ad{Random(gen, r, k), Random(gen, d, r)};
      const MatrixXd w0 = Random(gen, d, k);
      const VectorXd x = Random(gen, k, 1);
      const auto h = forge::LoraForward(w0, ad, x);
      const auto want = oracle::DenseLora(ToRows(w0), ToRows(ad.b), ToRows(ad.a), ToVec(x));
      double diff = 0, norm = 0;
      for (int i = 0; i < d; ++i) {
        diff = std::max(diff, std::abs(h(i) - want[i]));
        norm = std::max(norm, std::abs(want[i]));
      }
      CHECK(diff <= 1e-12 * std::max(1.0, norm));
    }
  }

  TEST_CASE("shape errors") {
    auto ad = forge::LoraInit(4, 5, 2, 1);
    CHECK(CodeOf([&] { forge::LoraForward(MatrixXd::Zero(4, 4), ad, VectorXd::Zero(5)); }) ==
          forge::ErrorCode::kShapeMismatch);
    CHECK(CodeOf([&] { forge::LoraForward(MatrixXd::Zero(4, 5), ad, VectorXd::Zero(4)); }) ==
          forge::ErrorCode::kShapeMismatch);
    ad.b = MatrixXd::Zero(4, 3);
    CHECK(CodeOf([&] { ad.CheckShapes(); }) == forge::ErrorCode::kShapeMismatch);
  }

  TEST_CASE("parameter counts reproduce the published table") {
    forge::AdapterTargetSet t;
    t.n_layers = 32;
    CHECK(forge::LoraParamCount(4096, 8, t) == 8388608u);
    t.n_layers = 40;
    CHECK(forge::LoraParamCount(5120, 8, t) == 13107200u);
    t.n_layers = 60;
    CHECK(forge::LoraParamCount(6656, 8, t) == 25559040u);
    // Rounded to two decimals in millions, as printed.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2fm", forge::LoraParamCount(4096, 8, 32, t.targets) / 1e6);
    CHECK(std::string(buf) == "8.39m");
    std::snprintf(buf, sizeof(buf), "%.2fm", forge::LoraParamCount(5120, 8, 40, t.targets) / 1e6);
    CHECK(std::string(buf) == "13.11m");
    std::snprintf(buf, sizeof(buf), "%.2fm", forge::LoraParamCount(6656, 8, 60, t.targets) / 1e6);
    CHECK(std::string(buf) == "25.56m");
    CHECK(forge::LoraParamCount(4096, 0, 32, t.targets) == 0u);
  }

  TEST_CASE("parameter count is linear in rank, layers and targets") {
    const std::set<AttentionProjection> all = {AttentionProjection::kQuery, AttentionProjection::kKey,
                                               AttentionProjection::kValue, AttentionProjection::kOutput};
    const std::set<AttentionProjection> qv = {AttentionProjection::kQuery, AttentionProjection::kValue};
    const auto base = forge::LoraParamCount(512, 4, 6, qv);
    CHECK(forge::LoraParamCount(512, 8, 6, qv) == 2 * base);
    CHECK(forge::LoraParamCount(512, 4, 12, qv) == 2 * base);
    CHECK(forge::LoraParamCount(512, 4, 6, all) == 2 * base);
    CHECK(base == 6u * 2u * 4u * 1024u);
  }

  TEST_CASE("analytic gradients match finite differences") {
    std::mt19937_64 gen(5);
    for (int t = 0; t < 20; ++t) {
      forge::LoraAdapter ad{Random(gen, 2, 8), Random(gen, 8, 2)};
      const MatrixXd w0 = Random(gen, 8, 8);
      const VectorXd x = Random(gen, 8, 1);
      const VectorXd y = Random(gen, 8, 1);
      CHECK(forge::GradCheck(w0, ad, x, y, 1e-5) <= 1e-4);

      // Independent check: finite differences from the oracle over A's entries.
      const auto grads = forge::LoraGrad(w0, ad, x, y);
      oracle::Vector flat_a(ad.a.data(), ad.a.data() + ad.a.size());
      auto loss_a = [&](const oracle::Vector& v) {
        forge::LoraAdapter probe = ad;
        std::copy(v.begin(), v.end(), probe.a.data());
        return forge::LoraLoss(w0, probe, x, y);
      };
      const auto fd = oracle::FdGradient(loss_a, flat_a, 1e-5);
      for (std::size_t i = 0; i < fd.size(); ++i) {
        const double g = grads.a.data()[i];
        CHECK(std::abs(g - fd[i]) <= 1e-4 * std::max(1.0, std::abs(fd[i])));
      }
    }
  }

  TEST_CASE("gradient preconditions and the stationary point") {
    std::mt19937_64 gen(6);
    forge::LoraAdapter ad{Random(gen, 2, 8), Random(gen, 8, 2)};
    const MatrixXd w0 = Random(gen, 8, 8);
    const VectorXd x = Random(gen, 8, 1);
    const VectorXd h = forge::LoraForward(w0, ad, x);
    const auto g = forge::LoraGrad(w0, ad, x, h);
    CHECK(g.a.isZero(0.0));
    CHECK(g.b.isZero(0.0));
    CHECK(CodeOf([&] { forge::GradCheck(w0, ad, x, h, 0.0); }) == forge::ErrorCode::kInvalidArgument);
    CHECK(CodeOf([&] { forge::GradCheck(w0, ad, x, h, 1e-2); }) == forge::ErrorCode::kInvalidArgument);
    CHECK(CodeOf([&] { forge::GradCheck(w0, ad, x, VectorXd::Zero(3), 1e-5); }) ==
          forge::ErrorCode::kShapeMismatch);
  }

  TEST_CASE("toy fit recovers a planted rank-two delta with W0 frozen") {
    std::mt19937_64 gen(8);
    const int d = 16, r = 2;
    const MatrixXd w0 = Random(gen, d, d);
    const MatrixXd delta = 0.5 * Random(gen, d, r) * Random(gen, r, d) / std::sqrt(double(d));
    const std::string before = Bytes(w0);
    const auto fit = forge::AdapterFitToy(w0, w0 + delta, r, 500, 0.05, 1, 0.1);
    CHECK(Bytes(w0) == before);
    REQUIRE(fit.losses.size() == 501);
    CHECK(fit.losses.back() <= 0.01 * fit.losses.front());
    // The planted delta is exactly representable, so the least-squares optimum
    // is BA == delta with zero loss; the fit must approach it.
    const MatrixXd learned = fit.adapter.b * fit.adapter.a;
    CHECK((learned - delta).norm() <= 0.1 * delta.norm());
    CHECK(std::abs(fit.losses.back() - 0.5 * (learned - delta).squaredNorm()) <= 1e-9);
  }

  TEST_CASE("target equal to W0 starts and stays at zero loss") {
    std::mt19937_64 gen(9);
    const MatrixXd w0 = Random(gen, 6, 6);
    const auto fit = forge::AdapterFitToy(w0, w0, 2, 20, 0.05, 3, 0.1);
    CHECK(fit.losses.front() == 0.0);
    CHECK(fit.adapter.b.isZero(0.0));
    CHECK(fit.adapter.a == forge::LoraInit(6, 6, 2, 3, 0.1).a);
  }

  TEST_CASE("absurd learning rate diverges") {
    std::mt19937_64 gen(10);
    const MatrixXd w0 = Random(gen, 16, 16);
    const MatrixXd target = w0 + Random(gen, 16, 2) * Random(gen, 2, 16);
    CHECK(CodeOf([&] { forge::AdapterFitToy(w0, target, 2, 500, 1e3, 1, 0.1); }) ==
          forge::ErrorCode::kDivergence);
  }
}
