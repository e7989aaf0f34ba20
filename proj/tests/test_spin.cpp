#include <doctest.h>

#include <random>

#include "magic/spin.hpp"
#include "oracles.hpp"

using namespace magic;

TEST_CASE("pair energy follows the -J s s convention") {
  Eigen::MatrixXd j(2, 2);
  j << 0.0, 3.0, 3.0, 0.0;
  CHECK(ising_energy(j, {1, 1}) == doctest::Approx(-3.0));
  CHECK(ising_energy(j, {1, -1}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(ising_energy(j, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("antiferromagnetic triangle is frustrated: three ground states") {
  Eigen::MatrixXd j = Eigen::MatrixXd::Constant(3, 3, -1.0);
  j.diagonal().setZero();
  const GroundState gs = ground_state(j);
  CHECK(gs.energy_rad_s == doctest::Approx(-1.0));
  REQUIRE(gs.configurations.size() == 3);  // six states, three up to global flip
  for (const auto& c : gs.configurations) {
    CHECK(c[0] == 1);
    CHECK(c[0] * c[1] + c[0] * c[2] + c[1] * c[2] == -1);
  }
}

TEST_CASE("tie detection respects the degeneracy tolerance") {
  Eigen::MatrixXd j = Eigen::MatrixXd::Constant(3, 3, -1.0);
  j.diagonal().setZero();
  j(0, 1) = j(1, 0) = -1.0 + 1e-15;  // below tolerance: still a tie
  CHECK(ground_state(j).configurations.size() == 3);
  // Weakening one bond clearly pins the frustration there: the two strong
  // bonds are satisfied and the minimum is unique.
  j(0, 1) = j(1, 0) = -1.0 + 1e-6;
  const GroundState split = ground_state(j);
  REQUIRE(split.configurations.size() == 1);
  CHECK(split.configurations[0] == std::vector<int>{1, 1, -1});
}

TEST_CASE("random four-spin instances match a brute-force enumeration") {
  std::mt19937 rng(20240815);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
    for (int n = 0; n < 4; ++n)
      for (int k = n + 1; k < 4; ++k) j(n, k) = j(k, n) = u(rng);
    const GroundState gs = ground_state(j);
    const oracles::BruteIsing ref = oracles::brute_ising(j);
    CHECK(gs.energy_rad_s == doctest::Approx(ref.energy).epsilon(1e-12));
    REQUIRE(gs.configurations.size() == ref.configs.size());
    CHECK(gs.configurations == ref.configs);
    CHECK(gs.states_visited == 8);
  }
}

TEST_CASE("unfrustrated bipartite chain orders as a unique Neel state") {
  const int n = 8;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  double total = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    j(i, i + 1) = j(i + 1, i) = -0.7 - 0.05 * i;  // nearest-neighbor AFM only
    total += std::abs(j(i, i + 1));
  }
  const GroundState gs = ground_state(j);
  REQUIRE(gs.configurations.size() == 1);
  for (int i = 0; i < n; ++i) CHECK(gs.configurations[0][i] == (i % 2 ? -1 : 1));
  CHECK(gs.energy_rad_s == doctest::Approx(-total));
}

TEST_CASE("decoupled ferromagnetic pairs double the degeneracy") {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
  j(0, 1) = j(1, 0) = 2.0;
  j(2, 3) = j(3, 2) = 2.0;
  const GroundState gs = ground_state(j);
  REQUIRE(gs.configurations.size() == 2);  // second pair free to point anywhere
  CHECK(gs.configurations[0] == std::vector<int>{1, 1, -1, -1});
  CHECK(gs.configurations[1] == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("search size limits") {
  CHECK_THROWS_AS(ground_state(Eigen::MatrixXd::Zero(27, 27)), std::invalid_argument);
  const GroundState one = ground_state(Eigen::MatrixXd::Zero(1, 1));
  CHECK(one.configurations.size() == 1);
  CHECK(one.energy_rad_s == 0.0);
}

TEST_CASE("frustration report separates blocks and measures triangle asymmetry") {
  const int n = 3, m = 6;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  auto set = [&](int a, int b, double v) { j(a, b) = j(b, a) = v; };
  set(0, 1, -5.0);
  set(1, 2, -5.0);
  set(3, 4, -4.0);
  set(4, 5, -4.0);
  for (int a = 0; a < n; ++a)
    for (int b = n; b < m; ++b) set(a, b, 0.5);

  // Aligned ladder: each ion faces a partner directly across.
  Eigen::MatrixXd aligned(m, 3);
  aligned << 0, 0, 0, 0, 0, 1, 0, 0, 2, 2, 0, 0, 2, 0, 1, 2, 0, 2;
  const FrustrationReport fa = frustration_report(j, aligned, n);
  CHECK(fa.intra_max_rad_s == doctest::Approx(5.0));
  CHECK(fa.inter_max_rad_s == doctest::Approx(0.5));
  CHECK(fa.ratio == doctest::Approx(10.0));
  CHECK(fa.ground_degeneracy >= 1);

  // Shifting one chain by half a spacing makes the middle triangles
  // isosceles: the asymmetry of interior ions collapses.
  Eigen::MatrixXd shifted = aligned;
  for (int k = n; k < m; ++k) shifted(k, 2) += 0.5;
  const FrustrationReport fs = frustration_report(j, shifted, n);
  CHECK(fs.triangle_asymmetry[1] < 1e-12);
  CHECK(fa.triangle_asymmetry[1] > 0.1);

  CHECK_THROWS_AS(frustration_report(j, aligned, 2), std::invalid_argument);
}
