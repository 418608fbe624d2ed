#pragma once

// Density-operator propagation under time-independent Hamiltonians.
//
// One eigendecomposition of H (in Hz) is reused for every time sample:
//   rho(t) = exp(-i 2pi H t) rho0 exp(+i 2pi H t).

#include "spinchain/hamiltonian.hpp"
#include "spinchain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace spinchain {

/// Uniformly sampled real series starting at t = 0.
struct Trajectory {
  double dt = 0.005;  // s
  std::vector<double> values;
  std::string observable_id;
  double apodization_tau = 0.0;  // s; 0 when no apodization was applied

  std::size_t size() const { return values.size(); }
  double time(std::size_t i) const { return static_cast<double>(i) * dt; }
};

/// Chain length plus the 1-based sites carrying the opposite sign.
struct InitialPattern {
  int n = 2;
  std::vector<int> flips;

  void validate() const {
    if (n < 1) throw std::invalid_argument("initial pattern needs n >= 1");
    std::set<int> seen;
    for (int s : flips) {
      if (s < 1 || s > n) throw std::out_of_range("flip site " + std::to_string(s) + " out of range 1.." + std::to_string(n));
      if (!seen.insert(s).second) throw std::invalid_argument("duplicate flip site " + std::to_string(s));
    }
  }
};

/// sum_i s_i Iz_i with s_i = -1 on flipped sites (traceless deviation operator).
inline Operator initial_xy(const InitialPattern& p) {
  p.validate();
  const Index dim = Index{1} << p.n;
  Matrix m = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    double v = 0.0;
    for (int site = 1; site <= p.n; ++site) {
      const bool flipped = std::find(p.flips.begin(), p.flips.end(), site) != p.flips.end();
      const double iz = (i & detail::site_bit(site, p.n)) ? -0.5 : 0.5;
      v += flipped ? -iz : iz;
    }
    m(i, i) = v;
  }
  return Operator(std::move(m), alpha_beta_basis(p.n));
}

/// Restricted-space label with T0 at `site` and S0 elsewhere.
inline ProductLabel single_triplet_label(int site, int n) {
  if (site < 1 || site > n) throw std::out_of_range("site " + std::to_string(site) + " out of range 1.." + std::to_string(n));
  std::vector<Symbol> s(static_cast<std::size_t>(n), Symbol::S0);
  s[static_cast<std::size_t>(site - 1)] = Symbol::T0;
  return ProductLabel(Alphabet::ST2, std::move(s));
}

/// |label><label| in the label's natural basis (alpha/beta, ST4 or ST2).
inline Operator population_op(const ProductLabel& label) {
  const Basis b{label.alphabet, static_cast<int>(label.size())};
  const Index i = index_of(b, label);
  Matrix m = Matrix::Zero(b.dim(), b.dim());
  m(i, i) = 1.0;
  return Operator(std::move(m), b);
}

/// Projector on a singlet/triplet product state, expressed in the full
/// 2n-spin alpha/beta space.
inline Operator population_op_full(const ProductLabel& label) {
  const StateVector v = st_product_vector(label);
  return Operator(v * v.adjoint(), alpha_beta_basis(2 * static_cast<int>(label.size())));
}

/// Signed sum of projectors; term j puts T0 on flips[j] and S0 on every
/// other CH2 group. Not trace-normalized and not positive semidefinite.
inline Operator initial_aliphatic(const InitialPattern& p, const std::vector<int>& signs) {
  p.validate();
  if (!signs.empty() && signs.size() != p.flips.size()) {
    throw std::invalid_argument("initial_aliphatic: need one sign per term");
  }
  const Basis b = st2_basis(p.n);
  Matrix m = Matrix::Zero(b.dim(), b.dim());
  for (std::size_t j = 0; j < p.flips.size(); ++j) {
    const int sign = signs.empty() ? 1 : signs[j];
    if (sign != 1 && sign != -1) throw std::invalid_argument("initial_aliphatic: signs must be +1 or -1");
    const Index idx = index_of(b, single_triplet_label(p.flips[j], p.n));
    m(idx, idx) += sign;
  }
  return Operator(std::move(m), b);
}

/// Maps a restricted {T0,S0}^n operator into the 2n-spin alpha/beta space.
inline Operator embed_restricted(const Operator& op) {
  if (op.basis().alphabet != Alphabet::ST2) throw std::invalid_argument("embed_restricted expects an st2 operator");
  const Matrix w = restricted_embedding(op.basis().sites);
  return Operator(w * op.matrix() * w.adjoint(), alpha_beta_basis(2 * op.basis().sites));
}

/// Iz_i normalized so that a fully inverted site reads -1/2 under the
/// deviation operators built by initial_xy: Iz_i / 2^(n-1).
inline Operator site_polarization_op(int site, int n) {
  Operator op = lift(single_spin_op(Axis::z), site, n);
  return op * cplx(std::ldexp(1.0, 1 - n));
}

/// Reusable propagator for one Hamiltonian (entries in Hz).
class Propagator {
 public:
  explicit Propagator(const Operator& h) : spec_(std::make_shared<const SpectralDecomposition>(h)) {}

  const SpectralDecomposition& spectrum() const { return *spec_; }

  Operator propagate(const Operator& rho0, double t) const {
    check(rho0);
    const Matrix r = spec_->to_eigenbasis(rho0.matrix());
    const auto& e = spec_->energies();
    const Index d = spec_->dim();
    Eigen::VectorXcd phase(d);
    for (Index a = 0; a < d; ++a) phase(a) = std::polar(1.0, -2.0 * std::numbers::pi * e(a) * t);
    const Matrix rt = phase.asDiagonal() * r * phase.conjugate().asDiagonal();
    return Operator(spec_->from_eigenbasis(rt), rho0.basis());
  }

  /// Samples Tr(O rho(t)) at t = 0, dt, ..., steps * dt. O and rho0 must
  /// be Hermitian.
  Trajectory observe(const Operator& rho0, const Operator& o, double dt, std::size_t steps,
                     std::string observable_id = {}) const {
    check(rho0);
    check(o);
    require_hermitian(rho0);
    require_hermitian(o);
    return observe_prepared(spec_->to_eigenbasis(rho0.matrix()), o, dt, steps, std::move(observable_id));
  }

  /// Several observables of one initial state; results are identical for
  /// any `threads` value.
  std::vector<Trajectory> observe_many(const Operator& rho0, const std::vector<Operator>& obs,
                                       const std::vector<std::string>& ids, double dt, std::size_t steps,
                                       unsigned threads = 1) const {
    check(rho0);
    require_hermitian(rho0);
    if (ids.size() != obs.size()) throw std::invalid_argument("observe_many: one id per observable");
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    for (const auto& o : obs) {
      check(o);
      require_hermitian(o);
    }
    const Matrix r = spec_->to_eigenbasis(rho0.matrix());
    std::vector<Trajectory> out(obs.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
      for (std::size_t i = begin; i < obs.size(); i += stride) {
        out[i] = observe_prepared(r, obs[i], dt, steps, ids[i]);
      }
    };
    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(obs.size(), 1));
    if (workers == 1) {
      work(0, 1);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }
    return out;
  }

 private:
  void check(const Operator& op) const {
    if (!(op.basis() == spec_->basis())) {
      throw std::invalid_argument("operator basis " + op.basis().name() + " does not match Hamiltonian basis " +
                                  spec_->basis().name());
    }
  }

  static void require_hermitian(const Operator& op) {
    if (!op.is_hermitian()) throw std::domain_error("trajectory sampling requires Hermitian operators");
  }

  Trajectory observe_prepared(const Matrix& rho_eig, const Operator& o, double dt, std::size_t steps,
                              std::string observable_id) const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    const Matrix oe = spec_->to_eigenbasis(o.matrix());
    const auto& e = spec_->energies();
    const Index d = spec_->dim();

    // <O(t)> = sum_a Re w_aa + 2 Re sum_{a<b} w_ab exp(-i 2pi (E_a - E_b) t)
    // with w_ab = O_ba rho_ab; Hermitian inputs make w_ba = conj(w_ab).
    double constant = 0.0;
    std::vector<double> omega;
    std::vector<cplx> weight;
    for (Index a = 0; a < d; ++a) {
      constant += (oe(a, a) * rho_eig(a, a)).real();
      for (Index b = a + 1; b < d; ++b) {
        const cplx w = oe(b, a) * rho_eig(a, b);
        if (w == cplx(0.0)) continue;
        omega.push_back(2.0 * std::numbers::pi * (e(a) - e(b)));
        weight.push_back(2.0 * w);
      }
    }

    Trajectory traj;
    traj.dt = dt;
    traj.observable_id = std::move(observable_id);
    traj.values.resize(steps + 1);
    // Phases advance by one complex multiply per step and are recomputed
    // exactly every kReseed steps, which bounds rounding drift.
    constexpr std::size_t kReseed = 64;
    std::vector<cplx> step(omega.size()), phase(omega.size());
    for (std::size_t j = 0; j < omega.size(); ++j) step[j] = std::polar(1.0, omega[j] * dt);
    for (std::size_t s = 0; s <= steps; ++s) {
      if (s % kReseed == 0) {
        const double t = static_cast<double>(s) * dt;
        for (std::size_t j = 0; j < omega.size(); ++j) phase[j] = std::polar(1.0, omega[j] * t);
      } else {
        for (std::size_t j = 0; j < omega.size(); ++j) phase[j] *= step[j];
      }
      double v = constant;
      for (std::size_t j = 0; j < omega.size(); ++j) {
        v += weight[j].real() * phase[j].real() + weight[j].imag() * phase[j].imag();
      }
      traj.values[s] = v;
    }
    return traj;
  }

  std::shared_ptr<const SpectralDecomposition> spec_;
};

inline Operator propagate(const Operator& h, const Operator& rho0, double t) { return Propagator(h).propagate(rho0, t); }

inline Trajectory observe_series(const Operator& h, const Operator& rho0, const Operator& o, double dt, std::size_t steps,
                                 std::string observable_id = {}) {
  return Propagator(h).observe(rho0, o, dt, steps, std::move(observable_id));
}

/// Number of steps covering `horizon` seconds at spacing dt.
inline std::size_t steps_for(double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw std::invalid_argument("horizon and dt must be positive");
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

/// First sampled time at which each trajectory is below `threshold`;
/// nullopt when it never crosses within the horizon.
inline std::vector<std::optional<double>> wavefront_arrival(const std::vector<Trajectory>& per_site, double threshold) {
  if (!(threshold > -0.5 && threshold < 0.5)) throw std::invalid_argument("threshold must lie in (-1/2, 1/2)");
  std::vector<std::optional<double>> out;
  out.reserve(per_site.size());
  for (const auto& tr : per_site) {
    std::optional<double> hit;
    for (std::size_t i = 0; i < tr.values.size(); ++i) {
      if (tr.values[i] < threshold) {
        hit = tr.time(i);
        break;
      }
    }
    out.push_back(hit);
  }
  return out;
}

}  // namespace spinchain
