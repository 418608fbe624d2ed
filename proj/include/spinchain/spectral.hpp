#pragma once

// Hermitian eigendecomposition that exploits block structure.
//
// The sparsity graph of H (exact nonzeros) is split into connected
// components and each component is diagonalized on its own. For the XY
// and J-coupling Hamiltonians these components are the conserved
// magnetization sectors, so a 2^n problem becomes a set of binomially
// sized ones.

#include "spinchain/spin_ops.hpp"

#include <Eigen/Eigenvalues>

#include <numeric>
#include <stdexcept>
#include <vector>

namespace spinchain {

class SpectralDecomposition {
 public:
  struct Component {
    std::vector<Index> basis;  // basis indices, ascending
    Index offset = 0;          // first eigen-index of this component
    Eigen::VectorXd energies;  // ascending
    Matrix vectors;            // basis.size() x basis.size()
  };

  explicit SpectralDecomposition(const Operator& h) : basis_(h.basis()), dim_(h.dim()) {
    if (!h.is_hermitian()) throw std::domain_error("eigendecomposition requires a Hermitian operator");
    const Matrix& m = h.matrix();

    std::vector<Index> parent(static_cast<std::size_t>(dim_));
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (Index c = 0; c < dim_; ++c) {
      for (Index r = 0; r < c; ++r) {
        if (m(r, c) != cplx(0.0)) {
          const Index a = find(r), b = find(c);
          if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
      }
    }

    std::vector<Index> root_to_component(static_cast<std::size_t>(dim_), -1);
    component_of_.assign(static_cast<std::size_t>(dim_), 0);
    for (Index i = 0; i < dim_; ++i) {
      const Index root = find(i);
      auto& slot = root_to_component[static_cast<std::size_t>(root)];
      if (slot < 0) {
        slot = static_cast<Index>(components_.size());
        components_.emplace_back();
      }
      components_[static_cast<std::size_t>(slot)].basis.push_back(i);
      component_of_[static_cast<std::size_t>(i)] = slot;
    }

    energies_.resize(dim_);
    Index offset = 0;
    for (auto& comp : components_) {
      const Index size = static_cast<Index>(comp.basis.size());
      Matrix sub(size, size);
      for (Index r = 0; r < size; ++r) {
        for (Index c = 0; c < size; ++c) sub(r, c) = m(comp.basis[static_cast<std::size_t>(r)], comp.basis[static_cast<std::size_t>(c)]);
      }
      comp.offset = offset;
      if (size == 1) {
        comp.energies = Eigen::VectorXd::Constant(1, sub(0, 0).real());
        comp.vectors = Matrix::Identity(1, 1);
      } else {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(sub);
        if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed to converge");
        comp.energies = solver.eigenvalues();
        comp.vectors = solver.eigenvectors();
      }
      energies_.segment(offset, size) = comp.energies;
      offset += size;
    }
  }

  const Basis& basis() const { return basis_; }
  Index dim() const { return dim_; }
  /// Eigenvalues (Hz), grouped by component.
  const Eigen::VectorXd& energies() const { return energies_; }
  const std::vector<Component>& components() const { return components_; }

  /// Dense eigenvector matrix; column j belongs to energies()(j).
  Matrix eigenvectors() const {
    Matrix v = Matrix::Zero(dim_, dim_);
    for (const auto& comp : components_) {
      const Index size = static_cast<Index>(comp.basis.size());
      for (Index r = 0; r < size; ++r) {
        for (Index c = 0; c < size; ++c) v(comp.basis[static_cast<std::size_t>(r)], comp.offset + c) = comp.vectors(r, c);
      }
    }
    return v;
  }

  /// V^dagger A V, computed block by block; sub-blocks of A that are
  /// identically zero are skipped and stay exactly zero.
  Matrix to_eigenbasis(const Matrix& a) const {
    if (a.rows() != dim_ || a.cols() != dim_) throw std::invalid_argument("to_eigenbasis: dimension mismatch");
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto& ca : components_) {
      for (const auto& cb : components_) {
        const Index ra = static_cast<Index>(ca.basis.size()), rb = static_cast<Index>(cb.basis.size());
        Matrix sub(ra, rb);
        bool any = false;
        for (Index r = 0; r < ra; ++r) {
          for (Index c = 0; c < rb; ++c) {
            const cplx v = a(ca.basis[static_cast<std::size_t>(r)], cb.basis[static_cast<std::size_t>(c)]);
            sub(r, c) = v;
            any = any || v != cplx(0.0);
          }
        }
        if (!any) continue;
        out.block(ca.offset, cb.offset, ra, rb) = ca.vectors.adjoint() * sub * cb.vectors;
      }
    }
    return out;
  }

  /// Inverse of to_eigenbasis: V A V^dagger.
  Matrix from_eigenbasis(const Matrix& a) const {
    const Matrix v = eigenvectors();
    return v * a * v.adjoint();
  }

  /// Component index of a basis state.
  Index component_of(Index basis_index) const { return component_of_[static_cast<std::size_t>(basis_index)]; }

 private:
  Basis basis_;
  Index dim_;
  std::vector<Component> components_;
  std::vector<Index> component_of_;
  Eigen::VectorXd energies_;
};

}  // namespace spinchain
