#include <doctest.h>

#include "prent/classifier.hpp"
#include "prent/error.hpp"
#include "prent/metrics.hpp"
#include "prent/optim.hpp"
#include "prent/random.hpp"

#include <cmath>

using namespace prent;

namespace {

sparse_features dense_rows(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m.sparseView();
}

} // namespace

TEST_CASE("L-BFGS finds the Rosenbrock minimum") {
  auto rosenbrock = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    const double a = 1 - x[0], b = x[1] - x[0] * x[0];
    g[0] = -2 * a - 400 * x[0] * b;
    g[1] = 200 * b;
    return a * a + 100 * b * b;
  };
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  optim::lbfgs_options opts;
  opts.gradient_tolerance = 1e-8;
  const auto r = optim::minimize<double>(rosenbrock, x0, opts);
  CHECK(r.converged);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.value < 1e-10);
}

TEST_CASE("L-BFGS on a convex quadratic matches the linear solve") {
  Eigen::MatrixXd a(3, 3);
  a << 4, 1, 0, 1, 3, 1, 0, 1, 2;
  Eigen::VectorXd b(3);
  b << 1, -2, 3;
  auto quad = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = a * x - b;
    return 0.5 * x.dot(a * x) - b.dot(x);
  };
  optim::lbfgs_options opts;
  opts.gradient_tolerance = 1e-10;
  const auto r = optim::minimize<double>(quad, Eigen::VectorXd::Zero(3), opts);
  CHECK((r.x - a.ldlt().solve(b)).norm() < 1e-8);
}

TEST_CASE("separable toy set is classified perfectly") {
  const auto x = dense_rows({{0, 1}, {0.2, 0.9}, {0.1, 1.2}, {0.3, 0.8}, {0.05, 1.1},
                             {1, 0}, {0.9, 0.2}, {1.2, 0.1}, {0.8, 0.3}, {1.1, 0.05}});
  const std::vector<std::string> y{"a", "a", "a", "a", "a", "b", "b", "b", "b", "b"};
  logistic_regression lr;
  lr.fit(x, y);
  CHECK(lr.classes() == std::vector<std::string>{"a", "b"});
  CHECK(lr.predict(x) == y);
  const auto p = lr.predict_proba(x);
  for (Eigen::Index i = 0; i < p.rows(); ++i) CHECK(p.row(i).sum() == doctest::Approx(1.0));
}

TEST_CASE("three classes and an intercept-only feature set") {
  // a column of zeros leaves only the intercept: predictions follow the majority
  const auto x = dense_rows({{0}, {0}, {0}, {0}, {0}, {0}});
  logistic_regression lr;
  lr.fit(x, {"c", "a", "c", "b", "c", "a"});
  CHECK(lr.classes().size() == 3);
  for (const auto& p : lr.predict(x)) CHECK(p == "c");
  const auto proba = lr.predict_proba(x);
  // with no penalty on the intercept the probabilities match class frequencies
  CHECK(proba(0, 2) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(proba(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("labels independent of features stay near chance") {
  random::engine rng(2024);
  auto sample = [&](std::size_t n, std::vector<std::string>& labels) {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t i = 0; i < n; ++i) {
      for (int f = 0; f < 20; ++f)
        if (random::uniform_below(rng, 4) == 0) t.emplace_back(static_cast<int>(i), f, 1.0);
      labels.push_back(random::uniform_below(rng, 2) ? "yes" : "no");
    }
    sparse_features m(static_cast<Eigen::Index>(n), 20);
    m.setFromTriplets(t.begin(), t.end());
    return m;
  };
  std::vector<std::string> ytr, yte;
  const auto xtr = sample(1000, ytr);
  const auto xte = sample(1000, yte);
  logistic_regression lr;
  lr.fit(xtr, ytr);
  const auto rep = classification_report(yte, lr.predict(xte));
  // binomial(1000, 0.5) sd is ~16; [0.4, 0.6] is more than six of them
  CHECK(rep.accuracy >= 0.4);
  CHECK(rep.accuracy <= 0.6);
}

TEST_CASE("degenerate labels") {
  logistic_regression lr;
  CHECK_THROWS_AS(lr.fit(dense_rows({{1}, {2}}), {"a", "a"}), degenerate_labels);
}

TEST_CASE("weighted metrics match a hand computation") {
  const std::vector<std::string> truth{"a", "a", "a", "b", "b", "c"};
  const std::vector<std::string> pred{"a", "a", "b", "b", "c", "c"};
  const auto r = classification_report(truth, pred);
  // a: p 2/2, r 2/3, f1 0.8 | b: p 1/2, r 1/2, f1 0.5 | c: p 1/2, r 1, f1 2/3
  CHECK(r.per_class.at("a").f1 == doctest::Approx(0.8));
  CHECK(r.per_class.at("c").f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.f1 == doctest::Approx((3 * 0.8 + 2 * 0.5 + 1 * (2.0 / 3.0)) / 6.0));
  CHECK(r.precision == doctest::Approx((3 * 1.0 + 2 * 0.5 + 0.5) / 6.0));
  CHECK(r.recall == doctest::Approx(4.0 / 6.0));
  CHECK(r.accuracy == doctest::Approx(4.0 / 6.0));
  CHECK(r.macro_f1 == doctest::Approx((0.8 + 0.5 + 2.0 / 3.0) / 3.0));
  CHECK(r.confusion(0, 1) == 1);
  CHECK(r.confusion(1, 2) == 1);
}

TEST_CASE("confusion matrix is consistent with the report") {
  random::engine rng(6);
  const std::vector<std::string> names{"w", "x", "y", "z"};
  for (int it = 0; it < 100; ++it) {
    std::vector<std::string> t, p;
    const auto n = 1 + random::uniform_below(rng, 60);
    for (std::uint64_t i = 0; i < n; ++i) {
      t.push_back(names[random::uniform_below(rng, 4)]);
      p.push_back(names[random::uniform_below(rng, 4)]);
    }
    const auto r = classification_report(t, p);
    CHECK(static_cast<double>(r.confusion.trace()) / static_cast<double>(n) == doctest::Approx(r.accuracy));
    CHECK(static_cast<std::uint64_t>(r.confusion.sum()) == n);
    for (std::size_t i = 0; i < r.labels.size(); ++i)
      CHECK(static_cast<std::size_t>(r.confusion.row(static_cast<Eigen::Index>(i)).sum()) ==
            r.per_class.at(r.labels[i]).support);
  }
}

TEST_CASE("binary report") {
  const auto b = binary_report({true, true, false, false, true}, {true, false, true, false, true});
  CHECK(b.tp == 2);
  CHECK(b.fp == 1);
  CHECK(b.fn == 1);
  CHECK(b.tn == 1);
  CHECK(b.precision == doctest::Approx(2.0 / 3.0));
  CHECK(b.recall == doctest::Approx(2.0 / 3.0));
  CHECK(b.accuracy == doctest::Approx(0.6));
  const auto none = binary_report({true, false}, {false, false});
  CHECK(none.precision == 0.0);
  CHECK(none.f1 == 0.0);
}
