#include "desitter/error.hpp"
#include "desitter/lorentz.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace desitter;

namespace {

LorentzVector e(int i) { return basis_vector(i - 1); }

LorentzVector random_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  LorentzVector v;
  for (int i = 0; i < 5; ++i) v(i) = n(rng);
  return v;
}

// nu from <nu, e_i> = det(a,b,c,d,e_i), each determinant by LU.
LorentzVector wedge_by_determinants(const LorentzVector& a, const LorentzVector& b,
                                    const LorentzVector& c, const LorentzVector& d) {
  LorentzVector pairings;
  for (int i = 0; i < 5; ++i) {
    LorentzMatrix m;
    m << a, b, c, d, basis_vector(i);
    pairings(i) = m.determinant();
  }
  return metric() * pairings;  // G^{-1} = G
}

}  // namespace

TEST(Inner, Examples) {
  EXPECT_DOUBLE_EQ(inner(e(5), e(5)), -1.0);
  LorentzVector x, y, u;
  x << 1, 2, 0, 0, 0;
  y << 0, 0, 0, 0, 7;
  u << 0, 0, 0, 1, 1;
  EXPECT_DOUBLE_EQ(inner(x, y), 0.0);
  EXPECT_DOUBLE_EQ(inner(u, u), 0.0);
}

TEST(Inner, BilinearSymmetric) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const LorentzVector x = random_vector(rng), y = random_vector(rng), z = random_vector(rng);
    const double a = 1.7, b = -0.3;
    const double lhs = inner(a * x + b * y, z);
    const double rhs = a * inner(x, z) + b * inner(y, z);
    EXPECT_NEAR(lhs, rhs, 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
    EXPECT_DOUBLE_EQ(inner(x, y), inner(y, x));
  }
}

TEST(CausalType, Examples) {
  LorentzVector a, b, c;
  a << 1, 0, 0, 0, 0;
  b << 0, 0, 0, 1, 1;
  c << 0, 0, 0, 0.5, 1;
  EXPECT_EQ(causal_type(a, 1e-9), CausalType::spacelike);
  EXPECT_EQ(causal_type(b, 1e-9), CausalType::lightlike);
  EXPECT_EQ(causal_type(c, 1e-9), CausalType::timelike);
  EXPECT_EQ(causal_type(LorentzVector::Zero(), 1e-9), CausalType::zero);
}

TEST(CausalType, ScaleInvariant) {
  LorentzVector c;
  c << 0, 0, 0, 0.5, 1;
  EXPECT_EQ(causal_type(1e-6 * c), CausalType::timelike);
  EXPECT_EQ(causal_type(1e6 * c), CausalType::timelike);
}

TEST(Wedge4, CoordinateFrame) {
  const LorentzVector nu = wedge4(e(1), e(2), e(3), e(4));
  EXPECT_NEAR((nu + e(5)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(inner(nu, e(5)), 1.0);
}

TEST(Wedge4, DependentArgumentsGiveZero) {
  EXPECT_EQ(sup_norm(wedge4(e(1), e(2), e(3), e(1))), 0.0);
}

TEST(Wedge4, MatchesDeterminantOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const LorentzVector a = random_vector(rng), b = random_vector(rng), c = random_vector(rng),
                        d = random_vector(rng);
    const LorentzVector nu = wedge4(a, b, c, d);
    const LorentzVector oracle = wedge_by_determinants(a, b, c, d);
    EXPECT_LE(sup_norm(nu - oracle), 1e-10 * sup_norm(oracle));
    for (const LorentzVector* v : {&a, &b, &c, &d}) {
      EXPECT_NEAR(inner(nu, *v), 0.0, 1e-10 * sup_norm(nu) * sup_norm(*v));
    }
  }
}

TEST(GramSchmidt, Examples) {
  {
    const std::vector<LorentzVector> in{e(1), e(1) + e(2)};
    const LorentzFrame f = gram_schmidt_lorentz(in);
    EXPECT_LE(sup_norm(f.basis[0] - e(1)), 1e-15);
    EXPECT_LE(sup_norm(f.basis[1] - e(2)), 1e-15);
    EXPECT_EQ(f.signs, (std::vector<int>{1, 1}));
    EXPECT_EQ(f.negative_count(), 0);
  }
  {
    const std::vector<LorentzVector> in{e(4) + e(5)};
    try {
      gram_schmidt_lorentz(in);
      FAIL() << "expected degenerate_span";
    } catch (const GeometryError& err) {
      EXPECT_EQ(err.kind(), ErrorKind::degenerate_span);
    }
  }
  {
    const std::vector<LorentzVector> in{e(4), e(5)};
    const LorentzFrame f = gram_schmidt_lorentz(in);
    EXPECT_LE(sup_norm(f.basis[1] - e(5)), 1e-15);
    EXPECT_EQ(f.signs, (std::vector<int>{1, -1}));
    EXPECT_EQ(f.negative_count(), 1);
  }
}

TEST(GramSchmidt, RandomFlagIsOrthonormal) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LorentzVector> in;
    for (int i = 0; i < 5; ++i) in.push_back(random_vector(rng));
    LorentzFrame f;
    try {
      f = gram_schmidt_lorentz(in);
    } catch (const GeometryError&) {
      continue;
    }
    EXPECT_EQ(f.negative_count(), 1);  // Sylvester's law of inertia
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        const double want = i == j ? f.signs[static_cast<std::size_t>(i)] : 0.0;
        EXPECT_NEAR(inner(f.basis[static_cast<std::size_t>(i)], f.basis[static_cast<std::size_t>(j)]),
                    want, 1e-9);
      }
    }
  }
}

TEST(OrthonormalizeSubspace, AcceptsNullFirstVector) {
  const std::vector<LorentzVector> in{e(4) + e(5), e(4)};
  const LorentzFrame f = orthonormalize_subspace(in);
  EXPECT_EQ(f.signs, (std::vector<int>{1, -1}));
  EXPECT_NEAR(inner(f.basis[0], f.basis[1]), 0.0, 1e-12);
}

TEST(OrthogonalComplement, Examples) {
  {
    const std::vector<LorentzVector> in{e(5)};
    const auto c = orthogonal_complement(in);
    ASSERT_EQ(c.size(), 4u);
    for (const auto& v : c) EXPECT_NEAR(v(4), 0.0, 1e-14);
  }
  {
    const std::vector<LorentzVector> in{e(1), e(2)};
    const auto c = orthogonal_complement(in);
    ASSERT_EQ(c.size(), 3u);
    for (const auto& v : c) {
      EXPECT_NEAR(v(0), 0.0, 1e-14);
      EXPECT_NEAR(v(1), 0.0, 1e-14);
    }
  }
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<LorentzVector> in{random_vector(rng), random_vector(rng)};
    const auto c = orthogonal_complement(in);
    ASSERT_EQ(c.size(), 3u);
    for (const auto& v : c) {
      for (const auto& w : in) EXPECT_NEAR(inner(v, w), 0.0, 1e-10 * sup_norm(w));
    }
  }
}

TEST(OrthogonalComplement, RankDeficient) {
  const std::vector<LorentzVector> in{e(1), 2.0 * e(1)};
  try {
    orthogonal_complement(in);
    FAIL();
  } catch (const GeometryError& err) {
    EXPECT_EQ(err.kind(), ErrorKind::rank_deficient);
  }
}

TEST(ComplementProjector, FixesComplementKillsSpan) {
  std::mt19937_64 rng(21);
  LorentzVector a = random_vector(rng);
  a(4) = 0.1;  // keep the pair space-like enough
  LorentzVector b = random_vector(rng);
  b(4) = -0.2;
  const std::vector<LorentzVector> span{a, b};
  const LorentzMatrix p = complement_projector(span);
  EXPECT_LE(sup_norm(p * a), 1e-12 * sup_norm(a));
  for (const auto& w : orthogonal_complement(span)) EXPECT_LE(sup_norm(p * w - w), 1e-12);
}

TEST(RandomTransform, Deterministic) {
  EXPECT_EQ(random_lorentz_transform(0).matrix(), random_lorentz_transform(0).matrix());
  EXPECT_NE(random_lorentz_transform(0).matrix(), random_lorentz_transform(1).matrix());
}

TEST(RandomTransform, PreservesFormAndFutureCone) {
  std::mt19937_64 rng(2);
  LorentzVector u;
  u << 0, 0, 0, 1, 1;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LorentzTransform m = random_lorentz_transform(seed);
    EXPECT_LE(m.form_residual(), 1e-10);
    EXPECT_TRUE(m.orthochronous());
    EXPECT_NEAR(m.determinant(), 1.0, 1e-8);
    const LorentzVector mu = m(u);
    EXPECT_EQ(causal_type(mu, 1e-9), CausalType::lightlike);
    EXPECT_GT(mu(4), 0.0);
    const LorentzVector x = random_vector(rng), y = random_vector(rng);
    const double a = inner(m(x), m(y)), b = inner(x, y);
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, sup_norm(m(x)) * sup_norm(m(y))));
    if (std::abs(inner(x, x)) > 10 * kDefaultCausalTol * std::pow(sup_norm(x), 2)) {
      EXPECT_EQ(causal_type(m(x)), causal_type(x));
    }
    const LorentzTransform id = m.compose(m.inverse());
    EXPECT_LE((id.matrix() - LorentzMatrix::Identity()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(LorentzTransform, RejectsNonIsometry) {
  LorentzMatrix m = LorentzMatrix::Identity();
  m(0, 0) = 2.0;
  EXPECT_THROW(LorentzTransform{m}, GeometryError);
}
