#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "shapeq/abelian.hpp"

using namespace shapeq;
using shapeq::testing::Rng;

namespace {

const Alphabet xy({"x", "y"});
constexpr Letter X = gen(0), Xi = inv(0), Y = gen(1), Yi = inv(1);

Word w(std::initializer_list<Letter> letters) { return Word(xy, letters); }

Matrix plykin() { return Matrix(Ring::Z, {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}}); }

// Enumerates GF(2) d x d matrices by bit pattern.
Matrix gf2_from_bits(std::size_t d, unsigned bits) {
  Matrix m(Ring::GF2, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m.set(i, j, (bits >> (i * d + j)) & 1u);
  }
  return m;
}

}  // namespace

TEST_CASE("abelianize counts signed letters per column", "[abelian]") {
  auto phi = FreeEndomorphism(xy, {w({X, Y, Y}), w({X, X, Y, Y, Y})});
  CHECK(abelianize(phi) == Matrix(Ring::Z, {{1, 2}, {2, 3}}));
  CHECK(abelianize(FreeEndomorphism::identity(xy)) == Matrix::identity(Ring::Z, 2));
  auto conj = FreeEndomorphism(xy, {w({X, Y, Xi}), w({Y})});
  CHECK(abelianize(conj).column(0) == Vector{0, 1});
  auto with_c = FreeEndomorphism(xy, {w({X}), w({Yi})}, w({Y, X}));
  CHECK(abelianize(with_c) == Matrix(Ring::Z, {{1, 0}, {0, -1}}));
}

TEST_CASE("Hermite normal form is canonical", "[abelian]") {
  ImageBasis a(Ring::Z, 2, {{2, 0}, {0, 3}});
  ImageBasis b(Ring::Z, 2, {{2, 3}, {4, 3}, {0, 6}});
  CHECK(a == b);
  CHECK(a.vectors() == std::vector<Vector>{{2, 0}, {0, 3}});
  ImageBasis c(Ring::Z, 2, {{4, 6}, {6, 9}});
  CHECK(c.rank() == 1);
  CHECK(c.vectors()[0] == Vector{2, 3});
  CHECK(ImageBasis(Ring::Z, 2, {{-1, 0}}).vectors()[0] == Vector{1, 0});
  CHECK(a.contains(Vector{4, -3}));
  CHECK_FALSE(a.contains(Vector{1, 0}));
  CHECK(a.coordinates(Vector{4, -3}) == Vector{2, -1});
}

TEST_CASE("image chain over Z", "[abelian]") {
  auto two = image_chain(Matrix(Ring::Z, {{2}}));
  CHECK(two.verdict == ChainVerdict::NeverStabilizes);
  CHECK_FALSE(two.stabilizes());
  CHECK(two.rank_equal_index == 0u);

  auto one = image_chain(Matrix(Ring::Z, {{1}}));
  CHECK(one.stabilizes());
  CHECK(one.stabilization_index == 0u);
  CHECK(one.restricted_invertible == true);

  auto zero = image_chain(Matrix(Ring::Z, {{0}}));
  CHECK(zero.stabilization_index == 1u);
  CHECK(zero.stable_rank == 0u);

  auto p = image_chain(plykin());
  CHECK(power(plykin(), 3).is_zero());
  CHECK_FALSE(power(plykin(), 2).is_zero());
  REQUIRE(p.stabilizes());
  CHECK(p.stabilization_index == 3u);
  CHECK(p.stable_rank == 0u);
  CHECK(p.stable_image().rank() == 0);
  std::vector<std::size_t> ranks;
  for (const auto& im : p.images) ranks.push_back(im.rank());
  CHECK(ranks == std::vector<std::size_t>{3, 2, 1, 0, 0});

  auto unimodular = image_chain(Matrix(Ring::Z, {{1, 2}, {2, 3}}));
  CHECK(unimodular.stabilization_index == 0u);
  auto det2 = image_chain(Matrix(Ring::Z, {{1, 1}, {1, -1}}));
  CHECK(det2.verdict == ChainVerdict::NeverStabilizes);
  // Mixed: kills one direction, doubles the other.
  auto mixed = image_chain(Matrix(Ring::Z, {{2, 0}, {0, 0}}));
  CHECK(mixed.verdict == ChainVerdict::NeverStabilizes);
  CHECK(mixed.rank_equal_index == 1u);
}

TEST_CASE("step budget exhaustion is inconclusive", "[abelian]") {
  auto p = image_chain(plykin(), 2);
  CHECK(p.verdict == ChainVerdict::Inconclusive);
  CHECK_FALSE(p.conclusive());
  CHECK_THROWS_AS(stable_image_isomorphism_check(plykin(), 2), NotStabilized);
  CHECK_THROWS_AS(stable_image_isomorphism_check(Matrix(Ring::Z, {{2}})), NotStabilized);
  CHECK_THROWS_AS(image_chain(plykin(), 0), InvalidArgument);
}

TEST_CASE("stable image isomorphism check", "[abelian]") {
  CHECK(stable_image_isomorphism_check(plykin()));
  CHECK(stable_image_isomorphism_check(Matrix::identity(Ring::Z, 4)));
  auto a = Matrix(Ring::GF2, {{1, 1}, {0, 0}});
  auto chain = image_chain(a);
  REQUIRE(chain.stabilizes());
  CHECK(chain.stable_image().vectors() == std::vector<Vector>{{1, 0}});
  CHECK(chain.stabilization_index == 1u);
  CHECK(stable_image_isomorphism_check(a));
  // Z: unipotent on a rank-2 stable image after one step.
  auto b = Matrix(Ring::Z, {{1, 1, 0}, {0, 1, 0}, {1, 0, 0}});
  CHECK(stable_image_isomorphism_check(b));
}

TEST_CASE("homology verdicts", "[abelian]") {
  auto v = homology_verdict(plykin().mod2(), 1, true);
  CHECK(v.dimension == 0);
  CHECK(v.text == "Ȟ₁(K;ℤ₂) = 0; K has the shape of a point (wedge of 0 circumferences)");
  auto id = homology_verdict(Matrix::identity(Ring::GF2, 3), 1, true);
  CHECK(id.dimension == 3);
  CHECK(id.text.find("wedge of 3 circumferences") != std::string::npos);
  auto z = homology_verdict(Matrix(Ring::GF2, 2), 2, false);
  CHECK(z.dimension == 0);
  CHECK(z.text == "Ȟ₂(K;ℤ₂) = 0");
  CHECK_THROWS_AS(homology_verdict(plykin(), 1, true), RingMismatch);
}

TEST_CASE("GF2 chains: nesting, bound and restricted bijection", "[abelian][property]") {
  for (std::size_t d = 1; d <= 3; ++d) {
    for (unsigned bits = 0; bits < (1u << (d * d)); ++bits) {
      Matrix m = gf2_from_bits(d, bits);
      auto chain = image_chain(m);
      REQUIRE(chain.stabilizes());
      CHECK(*chain.stabilization_index <= d);
      for (std::size_t n = 0; n + 1 < chain.images.size(); ++n) {
        CHECK(chain.images[n].contains(chain.images[n + 1]));
        CHECK(chain.images[n + 1] == ImageBasis(Ring::GF2, d, [&] {
                std::vector<Vector> cols;
                Matrix p = power(m, n + 1);
                for (std::size_t j = 0; j < d; ++j) cols.push_back(p.column(j));
                return cols;
              }()));
      }
      CHECK(stable_image_isomorphism_check(m));
    }
  }
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    Matrix m = gf2_from_bits(4, static_cast<unsigned>(rng() & 0xffffu));
    auto chain = image_chain(m);
    REQUIRE(chain.stabilizes());
    CHECK(*chain.stabilization_index <= 4);
    CHECK(stable_image_isomorphism_check(m));
  }
}

TEST_CASE("Z chains on random small matrices", "[abelian][property]") {
  Rng rng(23);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t d = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    Matrix m(Ring::Z, d);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m.set(i, j, entry(rng));
    }
    auto chain = image_chain(m);
    REQUIRE(chain.conclusive());
    for (std::size_t n = 0; n + 1 < chain.images.size(); ++n) {
      CHECK(chain.images[n].contains(chain.images[n + 1]));
    }
    if (chain.stabilizes()) {
      CHECK(stable_image_isomorphism_check(m));
      CHECK(*chain.stabilization_index <= d);
    } else {
      // The index stays constant and > 1: the next few images keep shrinking.
      ImageBasis cur = chain.images.back();
      for (int extra = 0; extra < 3; ++extra) {
        ImageBasis next = image_of(m, cur);
        CHECK(next.rank() == cur.rank());
        CHECK_FALSE(next == cur);
        cur = next;
      }
    }
  }
}

TEST_CASE("abelianization is functorial", "[abelian][property]") {
  Rng rng(61);
  const Alphabet abc({"a", "b", "c"});
  for (int trial = 0; trial < 300; ++trial) {
    auto phi = shapeq::testing::random_endomorphism(rng, abc, 4)
                   .with_conjugator(shapeq::testing::random_word(rng, abc, 3));
    auto psi = shapeq::testing::random_endomorphism(rng, abc, 4);
    CHECK(abelianize(compose(phi, psi)) == abelianize(phi) * abelianize(psi));
  }
}
