#pragma once

// Closed-form eigenpairs of tridiagonal Toeplitz blocks and the
// transition-frequency tables built from them.

#include "spinchain/hamiltonian.hpp"
#include "spinchain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinchain {

/// Tridiagonal Toeplitz matrix: constant diagonal, constant first
/// off-diagonals, dimension n.
struct ToeplitzSpec {
  double diagonal = 0.0;      // A, Hz
  double off_diagonal = 0.0;  // Delta, Hz
  int n = 1;
};

inline void validate(const ToeplitzSpec& s) {
  if (s.n < 1) throw std::invalid_argument("Toeplitz dimension must be >= 1");
}

/// E_k = A + 2 Delta cos(k pi / (n + 1)), k = 1..n. With Delta > 0 the
/// list is descending, so E_1 is the top level.
inline std::vector<double> toeplitz_eigenvalues(const ToeplitzSpec& s) {
  validate(s);
  std::vector<double> e(static_cast<std::size_t>(s.n));
  for (int k = 1; k <= s.n; ++k) {
    e[static_cast<std::size_t>(k - 1)] = s.diagonal + 2.0 * s.off_diagonal * std::cos(k * std::numbers::pi / (s.n + 1));
  }
  return e;
}

/// Standing-wave eigenvector k of any n x n tridiagonal Toeplitz matrix;
/// independent of A and Delta.
inline Eigen::VectorXd toeplitz_eigenvector(int k, int n) {
  if (n < 1) throw std::invalid_argument("Toeplitz dimension must be >= 1");
  if (k < 1 || k > n) throw std::out_of_range("wavenumber k=" + std::to_string(k) + " out of range 1.." + std::to_string(n));
  Eigen::VectorXd v(n);
  const double norm = std::sqrt(2.0 / (n + 1));
  for (int i = 1; i <= n; ++i) v(i - 1) = norm * std::sin(i * k * std::numbers::pi / (n + 1));
  return v;
}

inline Eigen::MatrixXd toeplitz_matrix(const ToeplitzSpec& s) {
  validate(s);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(s.n, s.n);
  for (int i = 0; i < s.n; ++i) {
    m(i, i) = s.diagonal;
    if (i + 1 < s.n) {
      m(i, i + 1) = s.off_diagonal;
      m(i + 1, i) = s.off_diagonal;
    }
  }
  return m;
}

struct Level {
  int k;
  double energy;  // Hz
};

struct Transition {
  int k;
  int l;
  double nu;  // |E_k - E_l|, Hz
};

struct TransitionTable {
  std::vector<Level> levels;            // sorted by k
  std::vector<Transition> transitions;  // (k, l), k < l, lexicographic

  double nu(int k, int l) const {
    for (const auto& t : transitions) {
      if (t.k == k && t.l == l) return t.nu;
    }
    throw std::out_of_range("no transition " + std::to_string(k) + "-" + std::to_string(l));
  }
};

/// Transition table from energies listed in k order (E_1 first).
inline TransitionTable transition_table(const std::vector<double>& energies) {
  if (energies.size() < 2) throw std::invalid_argument("transition table needs at least two levels");
  TransitionTable t;
  const int n = static_cast<int>(energies.size());
  for (int k = 1; k <= n; ++k) t.levels.push_back({k, energies[static_cast<std::size_t>(k - 1)]});
  for (int k = 1; k <= n; ++k) {
    for (int l = k + 1; l <= n; ++l) {
      t.transitions.push_back({k, l, std::abs(energies[static_cast<std::size_t>(k - 1)] - energies[static_cast<std::size_t>(l - 1)])});
    }
  }
  return t;
}

/// Tolerance below which two transition frequencies count as one line.
inline constexpr double kDegeneracyTolerance = 1e-6;

/// A set of transitions sharing one frequency (within kDegeneracyTolerance).
struct LineGroup {
  double nu;
  std::vector<std::pair<int, int>> members;

  std::string name() const {
    std::string s;
    for (const auto& [k, l] : members) {
      if (!s.empty()) s += "/";
      s += "nu" + std::to_string(k) + std::to_string(l);
    }
    return s;
  }
};

/// Distinct lines of a table, ascending in frequency.
inline std::vector<LineGroup> distinct_lines(const TransitionTable& t, double tol = kDegeneracyTolerance) {
  std::vector<Transition> sorted = t.transitions;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Transition& a, const Transition& b) { return a.nu < b.nu; });
  std::vector<LineGroup> out;
  for (const auto& tr : sorted) {
    if (!out.empty() && std::abs(out.back().nu - tr.nu) <= tol) {
      out.back().members.emplace_back(tr.k, tr.l);
    } else {
      out.push_back({tr.nu, {{tr.k, tr.l}}});
    }
  }
  for (auto& g : out) std::sort(g.members.begin(), g.members.end());
  return out;
}

/// Single-excitation XY block: Toeplitz with A = 0, Delta = J/2.
inline TransitionTable xy_predicted_spectrum(int n, double j) {
  if (n < 2) throw std::invalid_argument("XY chain needs n >= 2");
  return transition_table(toeplitz_eigenvalues({0.0, 0.5 * j, n}));
}

/// Second-order degenerate perturbation estimate (1/4) dJ^2 / J_gem, signed.
inline double pt2_splitting_estimate(double delta_j, double j_gem) {
  if (j_gem == 0.0) throw std::invalid_argument("pt2_splitting_estimate: J_gem must be nonzero");
  return 0.25 * delta_j * delta_j / j_gem;
}

/// Which single-excitation manifold of the restricted chain to predict:
/// one S0 among T0s, or one T0 among S0s (the manifold the terminal
/// inversion experiments populate).
enum class Manifold { SingleSinglet, SingleTriplet };

inline int manifold_singlets(Manifold m, int n) { return m == Manifold::SingleSinglet ? 1 : n - 1; }

/// Predicted aliphatic transitions. Energies are reported relative to the
/// manifold's geminal energy. Order 0 is the Toeplitz result with
/// Delta = dJ/2; order 2 diagonalizes the restricted Hamiltonian exactly and
/// keeps the n eigenstates with the largest weight in the manifold, so the
/// type-II shifts are included.
inline TransitionTable aliphatic_predicted_spectrum(const AliphaticParams& p, int order,
                                                    Manifold manifold = Manifold::SingleTriplet) {
  const int n = p.n();
  const int singlets = manifold_singlets(manifold, n);
  const double base = geminal_energy(singlets, n - singlets, p.j_gem());
  if (order == 0) return transition_table(toeplitz_eigenvalues({0.0, 0.5 * p.delta_j(), n}));
  if (order != 2) throw std::invalid_argument("order must be 0 or 2");

  const Operator h = build_aliphatic_restricted(p);
  const auto labels = basis_labels(h.basis());
  const SpectralDecomposition spec(h);

  struct Candidate {
    double weight;
    double energy;
  };
  std::vector<Candidate> cands;
  for (const auto& comp : spec.components()) {
    for (Index j = 0; j < comp.energies.size(); ++j) {
      double w = 0.0;
      for (std::size_t r = 0; r < comp.basis.size(); ++r) {
        if (excitation_count(labels[static_cast<std::size_t>(comp.basis[r])]) == singlets) {
          w += std::norm(comp.vectors(static_cast<Index>(r), j));
        }
      }
      cands.push_back({w, comp.energies(j)});
    }
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.weight > b.weight; });
  std::vector<double> energies;
  for (int i = 0; i < n; ++i) energies.push_back(cands[static_cast<std::size_t>(i)].energy - base);
  // k = 1 is the top level, matching the Toeplitz ordering for dJ > 0.
  if (p.delta_j() >= 0.0) {
    std::sort(energies.begin(), energies.end(), std::greater<>());
  } else {
    std::sort(energies.begin(), energies.end());
  }
  return transition_table(energies);
}

}  // namespace spinchain
