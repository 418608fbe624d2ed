#pragma once

// Spin-1/2 operator algebra on dense complex matrices.
//
// Tensor convention: site 1 is the leftmost (most significant) Kronecker
// factor. In the alpha/beta basis a basis index carries site s in bit
// (N - s), with alpha = 0 and beta = 1, so states are enumerated
// lexicographically with alpha before beta.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spinchain {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using Index = Eigen::Index;

enum class Axis { x, y, z };

/// Site alphabets. ST4 is the full per-CH2 singlet/triplet set, ST2 the
/// {T0, S0} two-level restriction.
enum class Alphabet : std::uint8_t { AlphaBeta, ST4, ST2 };

enum class Symbol : std::uint8_t { Alpha, Beta, Tp1, T0, S0, Tm1 };

inline int alphabet_size(Alphabet a) {
  switch (a) {
    case Alphabet::AlphaBeta: return 2;
    case Alphabet::ST4: return 4;
    case Alphabet::ST2: return 2;
  }
  return 0;
}

/// Symbols of an alphabet in basis order.
inline std::vector<Symbol> alphabet_symbols(Alphabet a) {
  switch (a) {
    case Alphabet::AlphaBeta: return {Symbol::Alpha, Symbol::Beta};
    case Alphabet::ST4: return {Symbol::Tp1, Symbol::T0, Symbol::S0, Symbol::Tm1};
    case Alphabet::ST2: return {Symbol::T0, Symbol::S0};
  }
  return {};
}

inline int symbol_digit(Alphabet a, Symbol s) {
  const auto syms = alphabet_symbols(a);
  const auto it = std::find(syms.begin(), syms.end(), s);
  if (it == syms.end()) {
    throw std::invalid_argument("symbol does not belong to the declared alphabet");
  }
  return static_cast<int>(it - syms.begin());
}

/// One-character spelling used in label strings: a/b for alpha/beta,
/// +/T/S/- for T+1, T0, S0, T-1.
inline char symbol_char(Symbol s) {
  switch (s) {
    case Symbol::Alpha: return 'a';
    case Symbol::Beta: return 'b';
    case Symbol::Tp1: return '+';
    case Symbol::T0: return 'T';
    case Symbol::S0: return 'S';
    case Symbol::Tm1: return '-';
  }
  return '?';
}

inline const char* alphabet_name(Alphabet a) {
  switch (a) {
    case Alphabet::AlphaBeta: return "ab";
    case Alphabet::ST4: return "st4";
    case Alphabet::ST2: return "st2";
  }
  return "?";
}

/// Product-state label: one symbol per site, all from one alphabet.
struct ProductLabel {
  Alphabet alphabet = Alphabet::AlphaBeta;
  std::vector<Symbol> sites;

  ProductLabel() = default;
  ProductLabel(Alphabet a, std::vector<Symbol> s) : alphabet(a), sites(std::move(s)) {
    for (Symbol sym : sites) symbol_digit(alphabet, sym);
  }

  std::size_t size() const { return sites.size(); }

  std::string str() const {
    std::string out;
    out.reserve(sites.size());
    for (Symbol s : sites) out.push_back(symbol_char(s));
    return out;
  }

  /// Parses "abba", "SSST", "+TS-". For ST4 both 'T' and '0' mean T0.
  static ProductLabel parse(std::string_view text, Alphabet a) {
    std::vector<Symbol> s;
    for (char c : text) {
      switch (c) {
        case 'a': s.push_back(Symbol::Alpha); break;
        case 'b': s.push_back(Symbol::Beta); break;
        case '+': s.push_back(Symbol::Tp1); break;
        case 'T': case '0': s.push_back(Symbol::T0); break;
        case 'S': s.push_back(Symbol::S0); break;
        case '-': s.push_back(Symbol::Tm1); break;
        default:
          throw std::invalid_argument("unknown site symbol '" + std::string(1, c) + "' in label");
      }
    }
    if (s.empty()) throw std::invalid_argument("empty product label");
    return ProductLabel(a, std::move(s));
  }

  friend bool operator==(const ProductLabel&, const ProductLabel&) = default;
};

/// Identifies an ordered label list: alphabet plus number of sites, labels
/// in natural Kronecker order.
struct Basis {
  Alphabet alphabet = Alphabet::AlphaBeta;
  int sites = 1;

  Index dim() const {
    Index d = 1;
    for (int i = 0; i < sites; ++i) d *= alphabet_size(alphabet);
    return d;
  }
  std::string name() const { return std::string(alphabet_name(alphabet)) + "(" + std::to_string(sites) + ")"; }

  friend bool operator==(const Basis&, const Basis&) = default;
};

inline Basis alpha_beta_basis(int n) { return {Alphabet::AlphaBeta, n}; }
inline Basis st4_basis(int n) { return {Alphabet::ST4, n}; }
inline Basis st2_basis(int n) { return {Alphabet::ST2, n}; }

inline ProductLabel label_at(const Basis& b, Index index) {
  const int base = alphabet_size(b.alphabet);
  const auto syms = alphabet_symbols(b.alphabet);
  std::vector<Symbol> s(static_cast<std::size_t>(b.sites));
  for (int site = b.sites - 1; site >= 0; --site) {
    s[static_cast<std::size_t>(site)] = syms[static_cast<std::size_t>(index % base)];
    index /= base;
  }
  return ProductLabel(b.alphabet, std::move(s));
}

inline Index index_of(const Basis& b, const ProductLabel& label) {
  if (label.alphabet != b.alphabet || static_cast<int>(label.size()) != b.sites) {
    throw std::invalid_argument("label " + label.str() + " is not in basis " + b.name());
  }
  const int base = alphabet_size(b.alphabet);
  Index idx = 0;
  for (Symbol s : label.sites) idx = idx * base + symbol_digit(b.alphabet, s);
  return idx;
}

inline std::vector<ProductLabel> basis_labels(const Basis& b) {
  std::vector<ProductLabel> out;
  const Index d = b.dim();
  out.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) out.push_back(label_at(b, i));
  return out;
}

/// Dense square operator tagged with the basis its rows/columns refer to.
class Operator {
 public:
  Operator() = default;
  Operator(Matrix m, Basis basis) : m_(std::move(m)), basis_(basis) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("operator matrix must be square");
    if (m_.rows() != basis_.dim()) {
      throw std::invalid_argument("operator dimension " + std::to_string(m_.rows()) +
                                  " does not match basis " + basis_.name());
    }
  }

  /// Constructs and asserts Hermiticity (relative tolerance 1e-12).
  static Operator hermitian(Matrix m, Basis basis) {
    Operator op(std::move(m), basis);
    if (!op.is_hermitian()) throw std::invalid_argument("operator is not Hermitian");
    return op;
  }

  const Matrix& matrix() const { return m_; }
  const Basis& basis() const { return basis_; }
  Index dim() const { return m_.rows(); }
  cplx operator()(Index r, Index c) const { return m_(r, c); }

  bool is_hermitian(double rel_tol = 1e-12) const {
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
  }

  cplx trace() const { return m_.trace(); }

  Operator& operator+=(const Operator& o) { check_same(o); m_ += o.m_; return *this; }
  Operator& operator-=(const Operator& o) { check_same(o); m_ -= o.m_; return *this; }
  Operator& operator*=(cplx s) { m_ *= s; return *this; }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b) {
    a.check_same(b);
    return Operator(a.m_ * b.m_, a.basis_);
  }

 private:
  void check_same(const Operator& o) const {
    if (!(basis_ == o.basis_)) {
      throw std::invalid_argument("basis mismatch: " + basis_.name() + " vs " + o.basis_.name());
    }
  }

  Matrix m_;
  Basis basis_;
};

inline Operator identity_op(const Basis& b) { return Operator(Matrix::Identity(b.dim(), b.dim()), b); }
inline Operator zero_op(const Basis& b) { return Operator(Matrix::Zero(b.dim(), b.dim()), b); }

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

/// Spin-1/2 Cartesian operator in the (alpha, beta) basis.
inline Operator single_spin_op(Axis axis) {
  Matrix m = Matrix::Zero(2, 2);
  switch (axis) {
    case Axis::x:
      m(0, 1) = 0.5;
      m(1, 0) = 0.5;
      break;
    case Axis::y:
      m(0, 1) = cplx(0.0, -0.5);
      m(1, 0) = cplx(0.0, 0.5);
      break;
    case Axis::z:
      m(0, 0) = 0.5;
      m(1, 1) = -0.5;
      break;
  }
  return Operator(std::move(m), alpha_beta_basis(1));
}

/// Embeds a single-spin operator at `site` (1-based) of an N-spin chain.
inline Operator lift(const Operator& op, int site, int n) {
  if (op.dim() != 2) throw std::invalid_argument("lift expects a 2x2 single-spin operator");
  if (n < 1 || site < 1 || site > n) {
    throw std::out_of_range("site " + std::to_string(site) + " out of range 1.." + std::to_string(n));
  }
  const Index dim = Index{1} << n;
  const Index bit = Index{1} << (n - site);
  Matrix m = Matrix::Zero(dim, dim);
  for (Index col = 0; col < dim; ++col) {
    const int c = (col & bit) ? 1 : 0;
    const Index base = col & ~bit;
    for (int r = 0; r < 2; ++r) {
      const cplx v = op(r, c);
      if (v != cplx(0.0)) m(r ? (base | bit) : base, col) = v;
    }
  }
  return Operator(std::move(m), alpha_beta_basis(n));
}

inline Operator total_iz(int n) {
  if (n < 1) throw std::invalid_argument("total_iz requires n >= 1");
  const Index dim = Index{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    int betas = 0;
    for (int s = 0; s < n; ++s) betas += (i >> s) & 1;
    m(i, i) = 0.5 * (n - 2 * betas);
  }
  return Operator(std::move(m), alpha_beta_basis(n));
}

/// Two-spin singlet/triplet vectors over (aa, ab, ba, bb), in the order
/// T+1, T0, S0, T-1.
inline std::array<StateVector, 4> st_vectors() {
  const double r = 1.0 / std::sqrt(2.0);
  std::array<StateVector, 4> v;
  for (auto& x : v) x = StateVector::Zero(4);
  v[0](0) = 1.0;
  v[1](1) = r;
  v[1](2) = r;
  v[2](1) = r;
  v[2](2) = -r;
  v[3](3) = 1.0;
  return v;
}

/// 4x4 unitary whose columns are st_vectors().
inline Matrix st_pair_unitary() {
  const auto v = st_vectors();
  Matrix u(4, 4);
  for (int j = 0; j < 4; ++j) u.col(j) = v[static_cast<std::size_t>(j)];
  return u;
}

/// Tr(O rho). Throws on basis mismatch or an imaginary part above 1e-10
/// (relative to the magnitude of the result).
inline double expectation(const Operator& o, const Operator& rho) {
  if (!(o.basis() == rho.basis())) {
    throw std::invalid_argument("expectation: basis mismatch " + o.basis().name() + " vs " +
                                rho.basis().name());
  }
  const cplx tr = o.matrix().transpose().cwiseProduct(rho.matrix()).sum();
  if (std::abs(tr.imag()) > 1e-10 * std::max(1.0, std::abs(tr.real()))) {
    throw std::domain_error("expectation has an imaginary residue; inputs are not Hermitian");
  }
  return tr.real();
}

inline bool is_unitary(const Matrix& u, double tol = 1e-12) {
  if (u.rows() != u.cols()) return false;
  const Matrix g = u.adjoint() * u;
  return (g - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// U^dagger O U, relabelled with `new_basis`.
inline Operator basis_change(const Operator& o, const Matrix& u, const Basis& new_basis) {
  if (u.rows() != o.dim() || u.cols() != new_basis.dim()) {
    throw std::invalid_argument("basis_change: unitary dimension mismatch");
  }
  if (!is_unitary(u)) throw std::invalid_argument("basis_change: matrix is not unitary");
  return Operator(u.adjoint() * o.matrix() * u, new_basis);
}

}  // namespace spinchain
