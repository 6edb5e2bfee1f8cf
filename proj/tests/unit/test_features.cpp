#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "features/generative.hpp"
#include "features/lars.hpp"
#include "features/selection.hpp"
#include "lasso_oracle.hpp"

using namespace evifuse;
using namespace evifuse::features;
using Catch = doctest::Approx;

namespace {

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n(0, 1);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

// Zero-mean orthonormal columns: QR of a centered gaussian matrix.
Eigen::MatrixXd orthonormal(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  Eigen::MatrixXd g = gaussian(rng, r, c);
  g.rowwise() -= g.colwise().mean();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(r, c);
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

// KKT conditions of 0.5 ||y - X b||^2 + lambda ||b||_1 at a knot.
void check_kkt(const Eigen::MatrixXd& xs, const Eigen::VectorXd& ys, const LarsKnot& k, double tol) {
  const Eigen::VectorXd c = xs.transpose() * (ys - xs * k.beta);
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    CHECK(std::abs(c(j)) <= k.lambda + tol);
    if (k.beta(j) != 0.0) CHECK(std::abs(c(j) - (k.beta(j) > 0 ? k.lambda : -k.lambda)) <= tol);
  }
}

}  // namespace

TEST_SUITE("generative channels") {
  TEST_CASE("ones") {
    Matrix ones = Matrix::Ones(2, 3);
    auto ch = generate_channels(ones, ones);
    CHECK(ch.size() == 8);
    for (const auto& n : generated_channel_names()) CHECK(ch.count(n) == 1);
    CHECK(ch.at(generated_channel_names()[2]) == Matrix::Constant(2, 3, 2.0));
    CHECK(ch.at(generated_channel_names()[3]) == ones);
    CHECK(ch.at(generated_channel_names()[4]) == ones);
    CHECK(ch.at(generated_channel_names()[5]) == ones);
    CHECK(ch.at(generated_channel_names()[6]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(ch.at(generated_channel_names()[7]).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("products and base-10 logs") {
    Matrix a(1, 2), b(1, 2);
    a << 10.0, 0.0;
    b << 0.1, -1.0;
    auto ch = generate_channels(a, b);
    const auto& names = generated_channel_names();
    CHECK(ch.at(names[3])(0, 0) == Catch(1.0).epsilon(1e-15));
    CHECK(ch.at(names[6])(0, 0) == Catch(1.0).epsilon(1e-15));
    CHECK(ch.at(names[7])(0, 0) == Catch(-1.0).epsilon(1e-15));
    CHECK(ch.at(names[6])(0, 1) == Catch(-12.0).epsilon(1e-12));
    CHECK(ch.at(names[7])(0, 1) == Catch(-12.0).epsilon(1e-12));
    CHECK(code_of([] { generate_channels(Matrix::Ones(2, 2), Matrix::Ones(2, 3)); }) == ErrorCode::ShapeMismatch);
  }

  TEST_CASE("concatenation keeps the requested order") {
    ChannelMap ch{{"a", Matrix::Constant(2, 1, 1.0)}, {"b", Matrix::Constant(2, 2, 2.0)}};
    Matrix all = concatenate(ch, {"b", "a"});
    CHECK(all.cols() == 3);
    CHECK(all(0, 0) == 2.0);
    CHECK(all(0, 2) == 1.0);
    CHECK(code_of([&] { concatenate(ch, {"c"}); }) == ErrorCode::InvalidArgument);
  }
}

TEST_SUITE("normalization") {
  TEST_CASE("examples") {
    Matrix m(1, 3);
    m << 0.0, 5.0, 10.0;
    auto n = normalize_minmax(m);
    CHECK(n.values(0, 0) == -1.0);
    CHECK(n.values(0, 1) == 0.0);
    CHECK(n.values(0, 2) == 1.0);
    CHECK(normalize_minmax(Matrix::Constant(2, 2, 3.0)).values.cwiseAbs().maxCoeff() == 0.0);
    Matrix v(1, 1);
    v << 12.0;
    CHECK(normalize_minmax(v, n.stats).values(0, 0) > 1.0);
  }

  TEST_CASE("property: idempotent with its own stats, range [-1, 1]") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
      Matrix m = gaussian(rng, 5, 7);
      auto a = normalize_minmax(m);
      auto b = normalize_minmax(m, a.stats);
      CHECK(a.values == b.values);
      CHECK(a.values.minCoeff() == Catch(-1.0).epsilon(1e-15));
      CHECK(a.values.maxCoeff() == Catch(1.0).epsilon(1e-15));
    }
  }
}

TEST_SUITE("lars") {
  TEST_CASE("orthonormal two-column design") {
    Eigen::MatrixXd x(4, 2);
    x << 0.5, 0.5, -0.5, 0.5, 0.5, -0.5, -0.5, -0.5;
    Eigen::VectorXd y = 3 * x.col(0) + x.col(1);
    auto path = lars_lasso_path(x, y);
    CHECK(path.entry_order == std::vector<std::size_t>{0, 1});
    REQUIRE(path.knots.size() == 3);
    CHECK(path.knots[0].lambda == Catch(3.0).epsilon(1e-12));
    CHECK(path.knots[1].lambda == Catch(1.0).epsilon(1e-12));
    CHECK(path.end().lambda == 0.0);
    CHECK(path.end().beta(0) == Catch(3.0).epsilon(1e-12));
    CHECK(path.end().beta(1) == Catch(1.0).epsilon(1e-12));
  }

  TEST_CASE("column collinear with the response") {
    std::mt19937_64 rng(1);
    Eigen::MatrixXd x = gaussian(rng, 12, 5);
    Eigen::VectorXd y = 2.0 * x.col(3).array() + 1.0;
    auto path = lars_lasso_path(x, y);
    CHECK(path.final_active == std::vector<std::size_t>{3});
    CHECK(path.knots.size() == 2);
  }

  TEST_CASE("zero-variance columns are excluded") {
    std::mt19937_64 rng(2);
    Eigen::MatrixXd x = gaussian(rng, 10, 4);
    x.col(1).setConstant(7.0);
    Eigen::VectorXd y = gaussian(rng, 10, 1);
    auto path = lars_lasso_path(x, y);
    CHECK(path.excluded == std::vector<std::size_t>{1});
    for (const auto& k : path.knots) CHECK(k.beta(1) == 0.0);
  }

  TEST_CASE("errors") {
    CHECK(code_of([] { lars_lasso_path(Eigen::MatrixXd::Ones(1, 3), Eigen::VectorXd::Ones(1)); }) ==
          ErrorCode::TooFewSamples);
    CHECK(code_of([] { lars_lasso_path(Eigen::MatrixXd::Ones(3, 3), Eigen::VectorXd::Ones(2)); }) ==
          ErrorCode::LengthMismatch);
  }

  TEST_CASE("property: soft thresholding on orthonormal designs") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const Eigen::Index n = 8 + trial % 5, p = 2 + trial % 5;
      Eigen::MatrixXd q = orthonormal(rng, n, p);
      Eigen::VectorXd y = gaussian(rng, n, 1);
      const Eigen::VectorXd yc = y.array() - y.mean();
      const Eigen::VectorXd ols = q.transpose() * yc;
      auto path = lars_lasso_path(q, y);
      for (const auto& k : path.knots)
        for (Eigen::Index j = 0; j < p; ++j) CHECK(std::abs(k.beta(j) - oracle::soft_threshold(ols(j), k.lambda)) < 1e-9);
    }
  }

  TEST_CASE("property: interior knots match coordinate descent, KKT holds, active set bounded") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd x = gaussian(rng, 10, 20);
      Eigen::VectorXd y = gaussian(rng, 10, 1);
      auto path = lars_lasso_path(x, y);
      auto s = oracle::standardize(x, y);
      CHECK(path.final_active.size() <= 9);
      for (std::size_t i = 1; i < path.knots.size(); ++i) CHECK(path.knots[i].lambda < path.knots[i - 1].lambda);
      for (const auto& k : path.knots) {
        check_kkt(s.x, s.y, k, 1e-8);
        CHECK((k.beta.array() != 0.0).count() <= 9);
      }
      const std::size_t m = path.knots.size();
      REQUIRE(m >= 5);
      for (std::size_t i : {m / 4, m / 2, 3 * m / 4}) {
        const auto& k = path.knots[i];
        REQUIRE(k.lambda > 0.0);
        const Eigen::VectorXd cd = oracle::lasso_cd(s.x, s.y, k.lambda);
        CHECK((cd - k.beta).cwiseAbs().maxCoeff() < 1e-6);
      }
    }
  }

  TEST_CASE("property: more columns than samples stays under the bound") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      auto path = lars_lasso_path(gaussian(rng, 10, 50), gaussian(rng, 10, 1));
      CHECK(path.final_active.size() <= 9);
    }
  }
}

TEST_SUITE("frequency selection") {
  TEST_CASE("target coding") {
    auto t = selection_target(infotheory::LabelVector{0, 1, 1});
    CHECK(t(0) == -1.0);
    CHECK(t(1) == 1.0);
    auto m = selection_target(infotheory::LabelVector{0, 2, 1});
    CHECK(m(1) == 2.0);
  }

  TEST_CASE("only the label copy is selected") {
    std::mt19937_64 rng(6);
    infotheory::LabelVector y{0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 0};
    Matrix m = gaussian(rng, 12, 15);
    for (Eigen::Index i = 0; i < 12; ++i) m(i, 9) = y[static_cast<std::size_t>(i)] == 1 ? 0.8 : 0.2;
    auto sel = select_frequencies(ChannelMap{{"x1", m}}, y);
    CHECK(sel.union_indices == std::vector<std::size_t>{9});

    // Univariate correlation agrees that column 9 is the one.
    auto s = oracle::standardize(m, selection_target(y));
    Eigen::Index best = 0;
    (s.x.transpose() * s.y).cwiseAbs().maxCoeff(&best);
    CHECK(best == 9);
  }

  TEST_CASE("disjoint informative columns across channels") {
    std::mt19937_64 rng(7);
    infotheory::LabelVector y{0, 1, 0, 1, 1, 0, 0, 1, 1, 0};
    Matrix a = gaussian(rng, 10, 6), b = gaussian(rng, 10, 6);
    for (Eigen::Index i = 0; i < 10; ++i) {
      a(i, 1) = y[static_cast<std::size_t>(i)];
      b(i, 4) = 3.0 - y[static_cast<std::size_t>(i)];
    }
    auto sel = select_frequencies(ChannelMap{{"a", a}, {"b", b}}, y);
    CHECK(sel.channels.at("a").indices == std::vector<std::size_t>{1});
    CHECK(sel.channels.at("b").indices == std::vector<std::size_t>{4});
    CHECK(sel.union_indices == std::vector<std::size_t>{1, 4});
  }

  TEST_CASE("property: per-channel cap and determinism") {
    std::mt19937_64 rng(8);
    infotheory::LabelVector y{0, 1, 0, 1, 1, 0, 0, 1};
    ChannelMap ch{{"a", gaussian(rng, 8, 30)}, {"b", gaussian(rng, 8, 4)}};
    auto s1 = select_frequencies(ch, y), s2 = select_frequencies(ch, y);
    CHECK(s1.channels.at("a").indices.size() <= 7);
    CHECK(s1.channels.at("b").indices.size() <= 4);
    CHECK(s1.union_indices == s2.union_indices);
    CHECK(s1.channels.at("a").coefficients == s2.channels.at("a").coefficients);
    CHECK(std::is_sorted(s1.union_indices.begin(), s1.union_indices.end()));
  }

  TEST_CASE("report csv") {
    FrequencySelection sel;
    sel.channels["x1"] = {{0, 2}, {0.5, -0.25}, {}};
    auto csv = format_selection_csv(sel, {100.0, 200.0, 300.0});
    CHECK(csv == "channel,frequency_index,frequency_hz,coefficient\nx1,0,100,0.5\nx1,2,300,-0.25\n");
  }
}
