#include "spinchain/dynamics.hpp"
#include "spinchain/hamiltonian.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace spinchain;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(XY, MatchesSpinOperatorConstruction) {
  for (int n = 2; n <= 6; ++n) {
    EXPECT_LT(max_abs(build_xy({n, 5.0}).matrix() - oracle::xy_hamiltonian(n, 5.0)), 1e-14) << n;
  }
}

TEST(XY, FlipFlopElementIsHalfJ) {
  const Operator h = build_xy({2, 5.0});
  const Index ab = index_of(h.basis(), ProductLabel::parse("ab", Alphabet::AlphaBeta));
  const Index ba = index_of(h.basis(), ProductLabel::parse("ba", Alphabet::AlphaBeta));
  EXPECT_DOUBLE_EQ(h(ab, ba).real(), 2.5);
  EXPECT_DOUBLE_EQ(h(0, 0).real(), 0.0);
}

TEST(XY, ConservesTotalIz) {
  for (int n = 2; n <= 7; ++n) {
    EXPECT_LT(max_abs(commutator(build_xy({n, 3.7}), total_iz(n)).matrix()), 1e-13) << n;
  }
}

TEST(XY, RejectsShortChains) { EXPECT_THROW(build_xy({1, 5.0}), std::invalid_argument); }

TEST(Aliphatic, FullMatchesSpinOperatorConstruction) {
  for (int n = 2; n <= 3; ++n) {
    const auto p = AliphaticParams::from_sum_diff(n, -14.0, 10.0, 5.0);
    EXPECT_LT(max_abs(build_aliphatic_full(p).matrix() - oracle::aliphatic_hamiltonian(n, -14.0, 10.0, 5.0)), 1e-13) << n;
  }
}

TEST(Aliphatic, SumDifferenceRoundTrip) {
  const auto p = AliphaticParams::from_sum_diff(3, -14.0, 10.0, 5.0);
  EXPECT_DOUBLE_EQ(p.j_gauche(), 7.5);
  EXPECT_DOUBLE_EQ(p.j_anti(), 2.5);
  EXPECT_DOUBLE_EQ(p.sigma_j(), 10.0);
  EXPECT_DOUBLE_EQ(p.delta_j(), 5.0);
  EXPECT_THROW(AliphaticParams(1, -14, 7.5, 2.5), std::invalid_argument);
}

TEST(Aliphatic, TwoGroupSTMatrixHasTwoOffDiagonalPairs) {
  const auto p = AliphaticParams::from_sum_diff(2, -14.0, 10.0, 5.0);
  const STBasis st = st_basis(2);
  ASSERT_TRUE(is_unitary(st.unitary));
  const Operator h = basis_change(build_aliphatic_full(p), st.unitary, st4_basis(2));
  const auto cs = classified_couplings(h, st.labels);
  ASSERT_EQ(cs.size(), 2u);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& c : cs) {
    EXPECT_NEAR(std::abs(c.value), 2.5, 1e-12);
    pairs.insert({c.a.str(), c.b.str()});
  }
  EXPECT_TRUE(pairs.count({"TT", "SS"}));
  EXPECT_TRUE(pairs.count({"TS", "ST"}));
}

TEST(Aliphatic, RestrictedEqualsProjectionOfFull) {
  for (int n = 2; n <= 4; ++n) {
    const auto p = AliphaticParams::from_sum_diff(n, -14.0, 10.0, 5.0);
    const Matrix w = restricted_embedding(n);
    const Matrix projected = w.adjoint() * build_aliphatic_full(p).matrix() * w;
    EXPECT_LT(max_abs(projected - build_aliphatic_restricted(p).matrix()), 1e-12) << n;
    // The restricted subspace is invariant: no leakage out of it.
    const Matrix hw = build_aliphatic_full(p).matrix() * w;
    EXPECT_LT(max_abs(hw - w * projected), 1e-12) << n;
  }
}

TEST(Aliphatic, RestrictedIndependentOfSigmaJ) {
  const auto a = AliphaticParams::from_sum_diff(4, -14.0, 0.0, 5.0);
  const auto b = AliphaticParams::from_sum_diff(4, -14.0, 10.0, 5.0);
  EXPECT_EQ(max_abs(build_aliphatic_restricted(a).matrix() - build_aliphatic_restricted(b).matrix()), 0.0);
}

TEST(Aliphatic, GeminalEnergies) {
  EXPECT_DOUBLE_EQ(geminal_energy(1, 0, -14.0), 10.5);
  EXPECT_DOUBLE_EQ(geminal_energy(0, 1, -14.0), -3.5);
  // Manifolds with 0, 2, 4 singlets in a four-group chain.
  EXPECT_DOUBLE_EQ(geminal_energy(0, 4, -14.0), -14.0);
  EXPECT_DOUBLE_EQ(geminal_energy(2, 2, -14.0), 14.0);
  EXPECT_DOUBLE_EQ(geminal_energy(4, 0, -14.0), 42.0);
}

TEST(Blocks, XYFourSpinsHasBinomialBlocksAndNoInterBlockEntries) {
  const Operator h = build_xy({4, 5.0});
  const auto d = extract_blocks(h, basis_labels(h.basis()));
  std::vector<std::size_t> sizes;
  for (const auto& b : d.blocks) sizes.push_back(b.labels.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 4, 6, 4, 1}));
  EXPECT_TRUE(d.inter_block().empty());
  for (const auto& c : d.couplings) EXPECT_EQ(c.kind, CouplingKind::TypeI);
}

TEST(Blocks, AliphaticDiagonalValuesPerManifold) {
  const auto p = AliphaticParams::from_sum_diff(4, -14.0, 10.0, 5.0);
  const Operator h = build_aliphatic_restricted(p);
  const auto d = extract_blocks(h, basis_labels(h.basis()));
  ASSERT_EQ(d.blocks.size(), 5u);
  // Relative to the single-singlet manifold: J_gem, 0, -J_gem, -2 J_gem, -3 J_gem.
  const double base = d.blocks[1].matrix(0, 0).real();
  const double expected[5] = {-14.0, 0.0, 14.0, 28.0, 42.0};
  for (std::size_t k = 0; k < 5; ++k) {
    for (Index i = 0; i < d.blocks[k].matrix.rows(); ++i) {
      EXPECT_DOUBLE_EQ(d.blocks[k].matrix(i, i).real() - base, expected[k]) << k;
    }
  }
  for (const auto& c : d.inter_block()) {
    EXPECT_EQ(c.kind, CouplingKind::TypeII);
    EXPECT_DOUBLE_EQ(c.value.real(), 2.5);
  }
  EXPECT_FALSE(d.inter_block().empty());
}

TEST(Blocks, SingleExcitationBlockIsXYBlockWithDeltaJ) {
  for (int n = 2; n <= 5; ++n) {
    const auto p = AliphaticParams::from_sum_diff(n, -14.0, 10.0, 5.0);
    const Operator ha = build_aliphatic_restricted(p);
    const Operator hx = build_xy({n, 5.0});
    const Matrix a = extract_blocks(ha, basis_labels(ha.basis())).blocks[1].matrix;
    const Matrix x = extract_blocks(hx, basis_labels(hx.basis())).blocks[1].matrix;
    const Matrix shifted = a - a(0, 0) * Matrix::Identity(a.rows(), a.cols());
    EXPECT_LT(max_abs(shifted - x), 1e-12) << n;
  }
}

TEST(Blocks, ClassificationRejectsOddChanges) {
  const auto a = ProductLabel::parse("TT", Alphabet::ST2);
  const auto b = ProductLabel::parse("TS", Alphabet::ST2);
  const auto c = ProductLabel::parse("SS", Alphabet::ST2);
  EXPECT_FALSE(classify_coupling(a, b).has_value());
  EXPECT_EQ(classify_coupling(a, c), CouplingKind::TypeII);
  Matrix bad = Matrix::Zero(4, 4);
  bad(0, 1) = bad(1, 0) = 1.0;
  const Operator op(bad, st2_basis(2));
  EXPECT_THROW(extract_blocks(op, basis_labels(op.basis())), std::logic_error);
}

TEST(Blocks, FiveManifoldSubmatrixKeepsEvenSingletCounts) {
  const auto p = AliphaticParams::from_sum_diff(4, -14.0, 10.0, 5.0);
  const Operator h = build_aliphatic_restricted(p);
  const auto [labels, m] = manifold_submatrix(h, basis_labels(h.basis()), {0, 2, 4});
  ASSERT_EQ(labels.size(), 8u);
  EXPECT_EQ(labels.front().str(), "TTTT");
  EXPECT_EQ(labels.back().str(), "SSSS");
  EXPECT_DOUBLE_EQ(m(0, 0).real(), -14.0);  // J_gem
  EXPECT_DOUBLE_EQ(m(7, 7).real(), 42.0);   // -3 J_gem
  EXPECT_DOUBLE_EQ(m(1, 1).real(), 14.0);   // -J_gem
}
