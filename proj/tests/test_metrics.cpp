#include "mfstokes/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

using namespace mfstokes;

namespace {

RunRecord record(int k_A, int k_S, int m, std::vector<double> residuals, RunStatus status) {
  RunRecord r;
  r.config.benchmark = "cavity2d";
  r.config.levels = 3;
  r.config.k_A = k_A;
  r.config.k_S = k_S;
  r.config.m = m;
  r.residuals = std::move(residuals);
  r.status = status;
  r.t_iter = 0.5;
  return r;
}

}  // namespace

TEST_CASE("convergence rate examples") {
  CHECK(*compute_q({1.0, 0.5, 0.25, 0.125}) == 0.5);
  CHECK(*compute_q({1.0, 1e-1, 1e-2, 1e-3, 1e-4}) == 0.1);
  const std::vector<double> growing{1.0, 0.9, 0.95, 1.1, 1.3};
  CHECK(*compute_q(growing) > 1.0);
  CHECK(classify(growing, RunStatus::max_iter) == RunStatus::diverged);
  CHECK_FALSE(compute_q({1.0, 0.5, 0.25}).has_value());
  CHECK_FALSE(compute_q({}).has_value());
}

TEST_CASE("time to reduce by eps") {
  CHECK(*compute_T(0.1, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*compute_T(0.5, 2.0) == doctest::Approx(6.6439).epsilon(1e-5));
  CHECK(*compute_T(0.5, 2.0, 0.01) == doctest::Approx(2.0 * *compute_T(0.5, 2.0)));
  CHECK_FALSE(compute_T(1.0, 1.0).has_value());
  CHECK_FALSE(compute_T(0.0, 1.0).has_value());
  CHECK_FALSE(compute_T(0.5, 0.0).has_value());
}

TEST_CASE("rate properties on seeded sequences") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.05, 0.95), scale(-6.0, 6.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> r{1.0};
    const int n = 4 + static_cast<int>(rng() % 8);
    for (int j = 1; j < n; ++j) r.push_back(r.back() * u(rng));
    const double c = std::pow(10.0, scale(rng));
    std::vector<double> scaled = r;
    for (double& v : scaled) v *= c;
    CHECK(*compute_q(scaled) == doctest::Approx(*compute_q(r)).epsilon(1e-12));
    const double q = *compute_q(r);
    CHECK(q > 0.0);
    CHECK(q < 1.0);
    // slower contraction takes longer
    const double q2 = std::min(0.999, q + 0.01);
    CHECK(*compute_T(q2, 1.0) > *compute_T(q, 1.0));
  }
}

TEST_CASE("classification") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(classify({1.0, 1e-11}, RunStatus::converged) == RunStatus::converged);
  CHECK(classify({1.0, 0.5, 0.4, 0.3, 0.2}, RunStatus::max_iter) == RunStatus::max_iter);
  CHECK(classify({1.0, nan}, RunStatus::max_iter) == RunStatus::diverged);
  CHECK(classify({1.0, 2.0}, RunStatus::diverged) == RunStatus::diverged);
  CHECK(to_string(RunStatus::max_iter) == "max-iter");
}

TEST_CASE("median") {
  CHECK(median({}) == 0.0);
  CHECK(median({3.0}) == 3.0);
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
}

TEST_CASE("heatmap") {
  SUBCASE("no records gives only the header") {
    std::ostringstream out;
    aggregate_heatmap(out, {});
    CHECK(out.str() == "m\n");
  }
  SUBCASE("single cell") {
    std::ostringstream out;
    aggregate_heatmap(out, {record(1, 2, 3, {1.0, 0.5, 0.25, 0.125}, RunStatus::converged)});
    CHECK(out.str() == "m,1/2\n3,0.500\n");
  }
  SUBCASE("diverged cells render as a hyphen") {
    std::ostringstream out;
    aggregate_heatmap(out, {record(0, 0, 1, {1.0, 2.0, 4.0, 8.0}, RunStatus::diverged),
                            record(1, 0, 1, {1.0, 0.1, 0.01, 0.001}, RunStatus::converged),
                            record(0, 0, 2, {1.0, 0.2, 0.04, 0.008}, RunStatus::converged)});
    CHECK(out.str() == "m,0/0,1/0\n1,-,0.100\n2,0.200,\n");
  }
  SUBCASE("reduction rate") {
    std::ostringstream out;
    aggregate_reduction_rate(out, {record(0, 0, 1, {1.0, 0.1, 0.01, 0.001}, RunStatus::converged)});
    CHECK(out.str() == "m,0/0\n1,2\n");
  }
}

TEST_CASE("record rows") {
  std::ostringstream out;
  write_record_header(out);
  write_record(out, record(1, 1, 2, {1.0, 0.1, 0.01, 0.001}, RunStatus::converged));
  write_record(out, record(1, 1, 2, {1.0, 2.0, 4.0, 8.0}, RunStatus::diverged), false);
  std::istringstream in(out.str());
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(std::count(header.begin(), header.end(), ',') == 14);
  CHECK(std::count(first.begin(), first.end(), ',') == 14);
  CHECK(first.find(",0.100000,") != std::string::npos);
  CHECK(first.substr(first.size() - 10) == ",converged");
  CHECK(second.find(",-,-,-,diverged") != std::string::npos);
}
