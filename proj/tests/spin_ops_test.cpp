#include "spinchain/spin_ops.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace spinchain;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(SingleSpin, CommutationRelations) {
  const Operator x = single_spin_op(Axis::x), y = single_spin_op(Axis::y), z = single_spin_op(Axis::z);
  const cplx i(0.0, 1.0);
  EXPECT_LT(max_abs((commutator(x, y) - i * z).matrix()), 1e-15);
  EXPECT_LT(max_abs((commutator(y, z) - i * x).matrix()), 1e-15);
  EXPECT_LT(max_abs((commutator(z, x) - i * y).matrix()), 1e-15);
}

TEST(Lift, MatchesExplicitKroneckerProduct) {
  for (int n = 1; n <= 5; ++n) {
    for (int site = 1; site <= n; ++site) {
      for (auto [axis, c] : {std::pair{Axis::x, 'x'}, {Axis::y, 'y'}, {Axis::z, 'z'}}) {
        const Operator op = lift(single_spin_op(axis), site, n);
        EXPECT_LT(max_abs(op.matrix() - oracle::spin(c, site, n)), 1e-15) << "n=" << n << " site=" << site;
      }
    }
  }
}

TEST(Lift, OperatorsOnDifferentSitesCommute) {
  const int n = 4;
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      const Operator x = lift(single_spin_op(Axis::x), a, n), y = lift(single_spin_op(Axis::y), b, n);
      EXPECT_LT(max_abs(commutator(x, y).matrix()), 1e-15);
    }
  }
}

TEST(Lift, SiteOneIsMostSignificant) {
  // |b a a> is basis index 4 for three spins.
  const Operator z1 = lift(single_spin_op(Axis::z), 1, 3);
  EXPECT_DOUBLE_EQ(z1(4, 4).real(), -0.5);
  EXPECT_DOUBLE_EQ(z1(3, 3).real(), 0.5);
  EXPECT_EQ(index_of(alpha_beta_basis(3), ProductLabel::parse("baa", Alphabet::AlphaBeta)), 4);
}

TEST(Lift, RejectsOutOfRangeSite) {
  EXPECT_THROW(lift(single_spin_op(Axis::z), 0, 3), std::out_of_range);
  EXPECT_THROW(lift(single_spin_op(Axis::z), 4, 3), std::out_of_range);
}

TEST(TotalIz, EqualsSumOfSiteOperators) {
  const int n = 5;
  Matrix sum = Matrix::Zero(1 << n, 1 << n);
  for (int s = 1; s <= n; ++s) sum += oracle::spin('z', s, n);
  EXPECT_LT(max_abs(total_iz(n).matrix() - sum), 1e-15);
}

TEST(Labels, RoundTripThroughBasisIndex) {
  for (Alphabet a : {Alphabet::AlphaBeta, Alphabet::ST4, Alphabet::ST2}) {
    const Basis b{a, 3};
    for (Index i = 0; i < b.dim(); ++i) {
      const ProductLabel l = label_at(b, i);
      EXPECT_EQ(index_of(b, l), i);
      EXPECT_EQ(ProductLabel::parse(l.str(), a).str(), l.str());
    }
  }
}

TEST(Labels, ST2OrderPutsTripletFirst) {
  EXPECT_EQ(label_at(st2_basis(2), 0).str(), "TT");
  EXPECT_EQ(label_at(st2_basis(2), 1).str(), "TS");
  EXPECT_EQ(label_at(st4_basis(1), 0).str(), "+");
  EXPECT_EQ(label_at(st4_basis(1), 3).str(), "-");
}

TEST(Labels, RejectsForeignSymbols) {
  EXPECT_THROW(ProductLabel::parse("abx", Alphabet::AlphaBeta), std::invalid_argument);
  EXPECT_THROW(ProductLabel::parse("T+S", Alphabet::ST2), std::invalid_argument);
  EXPECT_THROW(index_of(st2_basis(3), ProductLabel::parse("TS", Alphabet::ST2)), std::invalid_argument);
}

TEST(SingletTriplet, VectorsAreOrthonormalAndSingletIsAntisymmetric) {
  const auto v = st_vectors();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(v[i].dot(v[j])), i == j ? 1.0 : 0.0, 1e-15);
  }
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(v[2](1).real(), r, 1e-15);   // ab
  EXPECT_NEAR(v[2](2).real(), -r, 1e-15);  // ba
  EXPECT_NEAR(v[1](1).real(), r, 1e-15);
  EXPECT_NEAR(v[1](2).real(), r, 1e-15);
  EXPECT_TRUE(is_unitary(st_pair_unitary()));
}

TEST(SingletTriplet, EigenstatesOfPairHeisenbergTerm) {
  const Matrix dot = oracle::dot(1, 2, 2);
  const auto v = st_vectors();
  const double expected[4] = {0.25, 0.25, -0.75, 0.25};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LT((dot * v[i] - expected[i] * v[i]).norm(), 1e-15);
}

TEST(Expectation, RejectsBasisMismatchAndNonHermitianProducts) {
  const Operator z = lift(single_spin_op(Axis::z), 1, 2);
  EXPECT_THROW(expectation(z, identity_op(alpha_beta_basis(3))), std::invalid_argument);
  // Tr(Iz (i Iz)) is purely imaginary.
  EXPECT_THROW(expectation(z, z * cplx(0.0, 1.0)), std::domain_error);
  EXPECT_NEAR(expectation(z, z), 1.0, 1e-15);
}

TEST(Operator, RejectsMismatchedShapes) {
  EXPECT_THROW(Operator(Matrix::Zero(3, 3), alpha_beta_basis(2)), std::invalid_argument);
  EXPECT_THROW(Operator(Matrix::Zero(4, 2), alpha_beta_basis(2)), std::invalid_argument);
  EXPECT_THROW(identity_op(alpha_beta_basis(2)) + identity_op(st2_basis(2)), std::invalid_argument);
}

TEST(BasisChange, PreservesSpectrumAndTrace) {
  const Matrix h = oracle::dot(1, 2, 2) + 0.3 * oracle::spin('z', 1, 2);
  const Operator op(h, alpha_beta_basis(2));
  const Operator st = basis_change(op, st_pair_unitary(), st4_basis(1));
  EXPECT_NEAR(std::abs(st.trace() - op.trace()), 0.0, 1e-14);
  Eigen::SelfAdjointEigenSolver<Matrix> a(h), b(st.matrix());
  EXPECT_LT((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff(), 1e-14);
}
