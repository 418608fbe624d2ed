#pragma once

// XY and aliphatic-chain J-coupling Hamiltonians.
//
// All matrix entries are in Hz (the 2*pi factor is applied only during
// propagation). Chemical-shift and Zeeman terms are omitted from both
// models; couplings are uniform along the chain.

#include "spinchain/spin_ops.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spinchain {

struct XYParams {
  int n = 2;
  double J = 5.0;  // Hz
};

/// Uniform (CH2)_n chain couplings. Only the primary couplings are
/// stored, so the derived sum/difference can never go stale.
class AliphaticParams {
 public:
  AliphaticParams(int n, double j_gem, double j_gauche, double j_anti)
      : n_(n), j_gem_(j_gem), j_gauche_(j_gauche), j_anti_(j_anti) {
    if (n < 2) throw std::invalid_argument("aliphatic chain needs n >= 2 CH2 groups");
  }

  /// Builds from the symmetric/antisymmetric vicinal combinations.
  static AliphaticParams from_sum_diff(int n, double j_gem, double sigma_j, double delta_j) {
    return AliphaticParams(n, j_gem, 0.5 * (sigma_j + delta_j), 0.5 * (sigma_j - delta_j));
  }

  int n() const { return n_; }
  double j_gem() const { return j_gem_; }
  double j_gauche() const { return j_gauche_; }
  double j_anti() const { return j_anti_; }
  double sigma_j() const { return j_gauche_ + j_anti_; }
  double delta_j() const { return j_gauche_ - j_anti_; }

 private:
  int n_;
  double j_gem_;
  double j_gauche_;
  double j_anti_;
};

namespace detail {

inline Index site_bit(int site, int n) { return Index{1} << (n - site); }

// a.b Heisenberg term on two sites of an n-spin alpha/beta register.
inline void add_heisenberg(Matrix& m, int a, int b, int n, double coeff) {
  const Index ba = site_bit(a, n), bb = site_bit(b, n);
  for (Index i = 0; i < m.rows(); ++i) {
    const bool sa = i & ba, sb = i & bb;
    m(i, i) += coeff * (sa == sb ? 0.25 : -0.25);
    if (sa != sb) m(i ^ ba ^ bb, i) += 0.5 * coeff;
  }
}

inline void add_zz(Matrix& m, int a, int b, int n, double coeff) {
  const Index ba = site_bit(a, n), bb = site_bit(b, n);
  for (Index i = 0; i < m.rows(); ++i) {
    const double za = (i & ba) ? -0.5 : 0.5;
    const double zb = (i & bb) ? -0.5 : 0.5;
    m(i, i) += coeff * za * zb;
  }
}

}  // namespace detail

/// H_XY / 2pi = J * sum_i (Ix_i Ix_{i+1} + Iy_i Iy_{i+1}) in the alpha/beta basis.
inline Operator build_xy(const XYParams& p) {
  if (p.n < 2) throw std::invalid_argument("XY chain needs n >= 2 spins");
  const Index dim = Index{1} << p.n;
  Matrix m = Matrix::Zero(dim, dim);
  for (int site = 1; site < p.n; ++site) {
    const Index b1 = detail::site_bit(site, p.n), b2 = detail::site_bit(site + 1, p.n);
    for (Index i = 0; i < dim; ++i) {
      if (static_cast<bool>(i & b1) != static_cast<bool>(i & b2)) m(i ^ b1 ^ b2, i) += 0.5 * p.J;
    }
  }
  return Operator::hermitian(std::move(m), alpha_beta_basis(p.n));
}

/// Full 2^(2n) J-coupling Hamiltonian of a (CH2)_n chain, alpha/beta basis.
/// Spins 2i-1 and 2i form CH2 group i.
inline Operator build_aliphatic_full(const AliphaticParams& p) {
  const int spins = 2 * p.n();
  const Index dim = Index{1} << spins;
  Matrix m = Matrix::Zero(dim, dim);
  for (int g = 1; g <= p.n(); ++g) detail::add_heisenberg(m, 2 * g - 1, 2 * g, spins, p.j_gem());
  const double half_sum = 0.5 * p.sigma_j();
  const double half_diff = 0.5 * p.delta_j();
  for (int g = 1; g < p.n(); ++g) {
    const int a = 2 * g - 1, b = 2 * g, c = 2 * g + 1, d = 2 * g + 2;
    // (Iz_a + s Iz_b)(Iz_c + s Iz_d) for s = +1 (sum) and s = -1 (difference)
    detail::add_zz(m, a, c, spins, half_sum + half_diff);
    detail::add_zz(m, b, d, spins, half_sum + half_diff);
    detail::add_zz(m, a, d, spins, half_sum - half_diff);
    detail::add_zz(m, b, c, spins, half_sum - half_diff);
  }
  return Operator::hermitian(std::move(m), alpha_beta_basis(spins));
}

/// Ordered singlet/triplet product labels and the unitary whose columns are
/// the product states (rows in the 2n-spin alpha/beta basis).
struct STBasis {
  std::vector<ProductLabel> labels;
  Matrix unitary;
};

/// Alpha/beta amplitudes of an ST4 or ST2 product state of n CH2 groups.
inline StateVector st_product_vector(const ProductLabel& label) {
  if (label.alphabet == Alphabet::AlphaBeta) throw std::invalid_argument("expected a singlet/triplet label");
  const auto pair = st_vectors();
  StateVector v = StateVector::Ones(1);
  for (Symbol s : label.sites) {
    const StateVector& f = pair[static_cast<std::size_t>(symbol_digit(Alphabet::ST4, s))];
    StateVector next(v.size() * 4);
    for (Index i = 0; i < v.size(); ++i) next.segment(4 * i, 4) = v(i) * f;
    v = std::move(next);
  }
  return v;
}

inline STBasis st_basis(int n) {
  if (n < 1) throw std::invalid_argument("st_basis requires n >= 1");
  const Basis b = st4_basis(n);
  STBasis out;
  out.labels = basis_labels(b);
  const Matrix pair = st_pair_unitary();
  const Index dim = b.dim();
  out.unitary = Matrix::Zero(dim, dim);
  // Entry (row, col) is the product of per-pair entries; pair digits are
  // base-4 with group 1 most significant in both row and column indices.
  for (Index col = 0; col < dim; ++col) {
    for (Index row = 0; row < dim; ++row) {
      cplx v = 1.0;
      Index r = row, c = col;
      for (int g = 0; g < n && v != cplx(0.0); ++g) {
        v *= pair(r % 4, c % 4);
        r /= 4;
        c /= 4;
      }
      if (v != cplx(0.0)) out.unitary(row, col) = v;
    }
  }
  return out;
}

/// Isometry from the restricted {T0,S0}^n space into the 2n-spin
/// alpha/beta space; column j is the product state of st2 label j.
inline Matrix restricted_embedding(int n) {
  const Basis b = st2_basis(n);
  Matrix w(Index{1} << (2 * n), b.dim());
  for (Index j = 0; j < b.dim(); ++j) w.col(j) = st_product_vector(label_at(b, j));
  return w;
}

/// J_gem * (-3/4 N_S + 1/4 N_T), in Hz.
inline double geminal_energy(int singlets, int triplets, double j_gem) {
  if (singlets < 0 || triplets < 0) throw std::invalid_argument("negative singlet/triplet count");
  return j_gem * (-0.75 * singlets + 0.25 * triplets);
}

/// Number of excitations: beta sites (alpha/beta labels) or S0 sites (ST2).
inline int excitation_count(const ProductLabel& label) {
  Symbol excited;
  switch (label.alphabet) {
    case Alphabet::AlphaBeta: excited = Symbol::Beta; break;
    case Alphabet::ST2: excited = Symbol::S0; break;
    default: throw std::invalid_argument("excitation_count: unsupported alphabet " +
                                         std::string(alphabet_name(label.alphabet)));
  }
  return static_cast<int>(std::count(label.sites.begin(), label.sites.end(), excited));
}

/// Restricted H_J / 2pi over {T0, S0}^n. The symmetric vicinal term
/// annihilates m = 0 pair states, so only J_gem and Delta J enter.
inline Operator build_aliphatic_restricted(const AliphaticParams& p) {
  const int n = p.n();
  const Basis b = st2_basis(n);
  const Index dim = b.dim();
  Matrix m = Matrix::Zero(dim, dim);
  // Bit value 1 marks S0 (digit order T0, S0); group 1 is the top bit.
  for (Index i = 0; i < dim; ++i) {
    int singlets = 0;
    for (int g = 0; g < n; ++g) singlets += (i >> g) & 1;
    m(i, i) = geminal_energy(singlets, n - singlets, p.j_gem());
    for (int g = 1; g < n; ++g) {
      const Index flip = detail::site_bit(g, n) | detail::site_bit(g + 1, n);
      m(i ^ flip, i) += 0.5 * p.delta_j();
    }
  }
  return Operator::hermitian(std::move(m), b);
}

enum class CouplingKind { TypeI, TypeII };

inline const char* coupling_kind_name(CouplingKind k) { return k == CouplingKind::TypeI ? "type-I" : "type-II"; }

namespace detail {

inline int singlet_or_beta_count(const ProductLabel& l) {
  if (l.alphabet == Alphabet::ST4) {
    return static_cast<int>(std::count(l.sites.begin(), l.sites.end(), Symbol::S0));
  }
  return excitation_count(l);
}

}  // namespace detail

/// Classifies an off-diagonal element by the change in excitation number:
/// 0 is type-I (exchange within a block), 2 is type-II. Anything else
/// signals a construction error and returns nullopt.
inline std::optional<CouplingKind> classify_coupling(const ProductLabel& a, const ProductLabel& b) {
  const int d = std::abs(detail::singlet_or_beta_count(a) - detail::singlet_or_beta_count(b));
  if (d == 0) return CouplingKind::TypeI;
  if (d == 2) return CouplingKind::TypeII;
  return std::nullopt;
}

struct Block {
  int excitations = 0;
  std::vector<ProductLabel> labels;
  Matrix matrix;  // Hz
};

struct Coupling {
  ProductLabel a;
  ProductLabel b;
  cplx value;
  CouplingKind kind;
};

struct BlockDecomposition {
  std::vector<Block> blocks;
  /// Every off-diagonal nonzero (upper triangle in sorted order).
  std::vector<Coupling> couplings;

  std::vector<Coupling> inter_block() const {
    std::vector<Coupling> out;
    for (const auto& c : couplings) {
      if (c.kind == CouplingKind::TypeII) out.push_back(c);
    }
    return out;
  }
};

/// Excitation positions (1-based) of a label, in ascending order.
inline std::vector<int> excitation_positions(const ProductLabel& l) {
  const Symbol excited = l.alphabet == Alphabet::AlphaBeta ? Symbol::Beta : Symbol::S0;
  std::vector<int> pos;
  for (std::size_t i = 0; i < l.sites.size(); ++i) {
    if (l.sites[i] == excited) pos.push_back(static_cast<int>(i) + 1);
  }
  return pos;
}

/// Permutation sorting labels by (excitation count, excitation positions).
inline std::vector<Index> excitation_order(const std::vector<ProductLabel>& labels) {
  std::vector<Index> perm(labels.size());
  std::iota(perm.begin(), perm.end(), Index{0});
  std::vector<std::pair<int, std::vector<int>>> keys;
  keys.reserve(labels.size());
  for (const auto& l : labels) keys.emplace_back(excitation_count(l), excitation_positions(l));
  std::stable_sort(perm.begin(), perm.end(), [&](Index x, Index y) {
    return keys[static_cast<std::size_t>(x)] < keys[static_cast<std::size_t>(y)];
  });
  return perm;
}

/// Splits H into excitation-number blocks and lists the classified
/// off-diagonal couplings. `labels` give the row order of H.
inline BlockDecomposition extract_blocks(const Operator& h, const std::vector<ProductLabel>& labels,
                                         double threshold = 1e-12) {
  if (static_cast<Index>(labels.size()) != h.dim()) {
    throw std::invalid_argument("extract_blocks: label count does not match operator dimension");
  }
  const auto perm = excitation_order(labels);
  const Matrix& m = h.matrix();
  BlockDecomposition out;

  std::size_t start = 0;
  while (start < perm.size()) {
    const int k = excitation_count(labels[static_cast<std::size_t>(perm[start])]);
    std::size_t end = start;
    while (end < perm.size() && excitation_count(labels[static_cast<std::size_t>(perm[end])]) == k) ++end;
    Block blk;
    blk.excitations = k;
    const Index size = static_cast<Index>(end - start);
    blk.matrix.resize(size, size);
    for (std::size_t r = start; r < end; ++r) {
      blk.labels.push_back(labels[static_cast<std::size_t>(perm[r])]);
      for (std::size_t c = start; c < end; ++c) {
        blk.matrix(static_cast<Index>(r - start), static_cast<Index>(c - start)) = m(perm[r], perm[c]);
      }
    }
    out.blocks.push_back(std::move(blk));
    start = end;
  }

  for (std::size_t r = 0; r < perm.size(); ++r) {
    for (std::size_t c = r + 1; c < perm.size(); ++c) {
      const cplx v = m(perm[r], perm[c]);
      if (std::abs(v) <= threshold) continue;
      const auto& la = labels[static_cast<std::size_t>(perm[r])];
      const auto& lb = labels[static_cast<std::size_t>(perm[c])];
      const auto kind = classify_coupling(la, lb);
      if (!kind) {
        throw std::logic_error("anomalous coupling between " + la.str() + " and " + lb.str());
      }
      out.couplings.push_back({la, lb, v, *kind});
    }
  }
  return out;
}

/// Off-diagonal nonzeros of an operator in its own label order, classified.
/// Used for the full singlet/triplet (ST4) representation where blocks are
/// not defined.
inline std::vector<Coupling> classified_couplings(const Operator& h, const std::vector<ProductLabel>& labels,
                                                  double threshold = 1e-12) {
  std::vector<Coupling> out;
  const Matrix& m = h.matrix();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = r + 1; c < m.cols(); ++c) {
      if (std::abs(m(r, c)) <= threshold) continue;
      const auto& la = labels[static_cast<std::size_t>(r)];
      const auto& lb = labels[static_cast<std::size_t>(c)];
      const auto kind = classify_coupling(la, lb);
      if (!kind) throw std::logic_error("anomalous coupling between " + la.str() + " and " + lb.str());
      out.push_back({la, lb, m(r, c), *kind});
    }
  }
  return out;
}

/// Submatrix over all labels whose excitation count is in `counts`, in
/// excitation order; e.g. {0, 2, 4} for the type-II coupled even manifolds.
inline std::pair<std::vector<ProductLabel>, Matrix> manifold_submatrix(const Operator& h,
                                                                       const std::vector<ProductLabel>& labels,
                                                                       const std::vector<int>& counts) {
  std::vector<Index> keep;
  for (Index i : excitation_order(labels)) {
    const int k = excitation_count(labels[static_cast<std::size_t>(i)]);
    if (std::find(counts.begin(), counts.end(), k) != counts.end()) keep.push_back(i);
  }
  const Index size = static_cast<Index>(keep.size());
  Matrix sub(size, size);
  std::vector<ProductLabel> kept;
  for (Index r = 0; r < size; ++r) {
    kept.push_back(labels[static_cast<std::size_t>(keep[static_cast<std::size_t>(r)])]);
    for (Index c = 0; c < size; ++c) {
      sub(r, c) = h(keep[static_cast<std::size_t>(r)], keep[static_cast<std::size_t>(c)]);
    }
  }
  return {std::move(kept), std::move(sub)};
}

}  // namespace spinchain
