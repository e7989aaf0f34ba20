#include "magic/spin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace magic {

double ising_energy(const Eigen::MatrixXd& j_rad_s, const std::vector<int>& spins) {
  const int m = static_cast<int>(j_rad_s.rows());
  if (static_cast<int>(spins.size()) != m)
    throw std::invalid_argument("spin count does not match coupling matrix");
  double e = 0.0;
  for (int n = 0; n < m; ++n)
    for (int k = n + 1; k < m; ++k) e -= j_rad_s(n, k) * spins[n] * spins[k];
  return e;
}

GroundState ground_state(const Eigen::MatrixXd& j_rad_s, double degeneracy_tol) {
  const int m = static_cast<int>(j_rad_s.rows());
  if (m < 1) throw std::invalid_argument("empty coupling matrix");
  if (m > 26) throw std::invalid_argument("exhaustive search limited to 26 spins");

  // Enumerate the 2^(m-1) configurations with s_0 = +1 in Gray-code order,
  // maintaining the energy and the local fields h_n = sum_k J_nk s_k
  // incrementally (flipping spin p changes E by 2 s_p h_p).  Candidate
  // minima are re-evaluated from scratch afterwards so that accumulated
  // rounding cannot decide degeneracy.
  Eigen::MatrixXd j = j_rad_s;
  j.diagonal().setZero();  // self-terms are constants, keep the fields clean
  std::vector<int> s(m, 1);
  Eigen::VectorXd h = j.rowwise().sum();
  double e = ising_energy(j_rad_s, s);

  GroundState out;
  double best = e;
  // Keep anything within a safety margin of the running minimum; exact
  // filtering happens after the scan.
  const double slop = std::max(degeneracy_tol, 1e-9 * j_rad_s.cwiseAbs().sum());
  std::vector<std::pair<double, std::vector<int>>> candidates;
  candidates.emplace_back(e, s);

  const std::uint64_t total = 1ull << (m - 1);
  for (std::uint64_t i = 1; i < total; ++i) {
    const int p = std::countr_zero(i) + 1;  // spin to flip (s_0 stays +1)
    e += 2.0 * s[p] * h(p);
    s[p] = -s[p];
    h += 2.0 * s[p] * j.col(p);  // h_n gains J_np (s_p_new - s_p_old)
    if (e <= best + slop) {
      if (e < best) best = e;
      candidates.emplace_back(e, s);
      // Drop stale candidates occasionally to bound memory.
      if (candidates.size() > 100000) {
        std::erase_if(candidates,
                      [&](const auto& c) { return c.first > best + slop; });
        if (candidates.size() > 100000)
          throw std::runtime_error("ground-state degeneracy too large to enumerate");
      }
    }
  }
  out.states_visited = total;

  // Exact re-evaluation of the surviving candidates.
  double exact_best = std::numeric_limits<double>::infinity();
  for (auto& c : candidates) {
    c.first = ising_energy(j_rad_s, c.second);
    exact_best = std::min(exact_best, c.first);
  }
  out.energy_rad_s = exact_best;
  for (const auto& c : candidates)
    if (c.first <= exact_best + degeneracy_tol) out.configurations.push_back(c.second);
  std::sort(out.configurations.begin(), out.configurations.end());
  out.configurations.erase(
      std::unique(out.configurations.begin(), out.configurations.end()),
      out.configurations.end());
  return out;
}

FrustrationReport frustration_report(const Eigen::MatrixXd& j_rad_s,
                                     const Eigen::MatrixXd& positions_l,
                                     int ions_per_chain) {
  const int m = static_cast<int>(j_rad_s.rows());
  if (2 * ions_per_chain != m)
    throw std::invalid_argument("frustration report expects two equal chains");
  if (positions_l.rows() != m)
    throw std::invalid_argument("positions do not match coupling matrix");

  FrustrationReport rep;
  for (int n = 0; n < m; ++n) {
    for (int k = n + 1; k < m; ++k) {
      const bool same = (n < ions_per_chain) == (k < ions_per_chain);
      const double a = std::abs(j_rad_s(n, k));
      if (same)
        rep.intra_max_rad_s = std::max(rep.intra_max_rad_s, a);
      else
        rep.inter_max_rad_s = std::max(rep.inter_max_rad_s, a);
    }
  }
  rep.ratio = rep.inter_max_rad_s > 0.0 ? rep.intra_max_rad_s / rep.inter_max_rad_s
                                        : std::numeric_limits<double>::infinity();

  const GroundState gs = ground_state(j_rad_s);
  rep.ground_degeneracy = static_cast<int>(gs.configurations.size());
  rep.ground_energy_rad_s = gs.energy_rad_s;

  // Distance asymmetry of the triangles each chain-1 ion forms with its two
  // nearest chain-2 partners: zero for the isosceles triangles of a shifted
  // (triangular) ladder's interior, larger at the edges or when aligned.
  for (int n = 0; n < ions_per_chain; ++n) {
    double d1 = std::numeric_limits<double>::infinity();
    double d2 = d1;
    for (int k = ions_per_chain; k < m; ++k) {
      const double d = (positions_l.row(n) - positions_l.row(k)).norm();
      if (d < d1) {
        d2 = d1;
        d1 = d;
      } else if (d < d2) {
        d2 = d;
      }
    }
    rep.triangle_asymmetry.push_back((d2 - d1) / (0.5 * (d1 + d2)));
  }
  return rep;
}

}  // namespace magic
