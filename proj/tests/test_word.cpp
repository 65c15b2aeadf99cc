#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "shapeq/word.hpp"

using namespace shapeq;
using shapeq::testing::Rng;

namespace {

const Alphabet xy({"x", "y"});
constexpr Letter X = gen(0), Xi = inv(0), Y = gen(1), Yi = inv(1);

Word w(std::initializer_list<Letter> letters) { return Word(xy, letters); }

FreeEndomorphism stallings_example() {
  return FreeEndomorphism(xy, {w({X, Y, Y}), w({X, X, Y, Y, Y})});
}

}  // namespace

TEST_CASE("reduce cancels adjacent inverse pairs", "[word]") {
  CHECK(w({X, Xi}).is_identity());
  CHECK(w({X, Y, Yi, Xi}).is_identity());
  CHECK(w({X, Y, Y}).length() == 3);
  CHECK(w({X, Y, Y}).to_string() == "x y^2");
  CHECK_THROWS_AS(Word(xy, {gen(2)}), GeneratorOutOfRange);
}

TEST_CASE("multiply and invert", "[word]") {
  CHECK(multiply(w({X, Y}), w({Yi, X})) == w({X, X}));
  CHECK(multiply(Word(xy), w({X, Yi})) == w({X, Yi}));
  CHECK(multiply(w({X, Y, Y}), w({X, X, Y, Y, Y})) == w({X, Y, Y, X, X, Y, Y, Y}));
  CHECK(invert(w({X, Y, Y})) == w({Yi, Yi, Xi}));
  CHECK(invert(Word(xy)).is_identity());
  CHECK(invert(w({Xi, Y})) == w({Yi, X}));
  CHECK_THROWS_AS(multiply(w({X}), Word(Alphabet({"a", "b"}), {gen(0)})), AlphabetMismatch);
}

TEST_CASE("alphabets reject duplicate and empty names", "[word]") {
  CHECK_THROWS_AS(Alphabet({"x", "x"}), InvalidArgument);
  CHECK_THROWS_AS(Alphabet({""}), InvalidArgument);
  CHECK(Alphabet({"x", "y"}) == xy);
  CHECK_FALSE(Alphabet({"y", "x"}) == xy);
}

TEST_CASE("apply follows generator images", "[word]") {
  auto phi = stallings_example();
  CHECK(apply(phi, w({X})) == w({X, Y, Y}));
  CHECK(apply(phi, w({Xi})) == w({Yi, Yi, Xi}));
  auto id = FreeEndomorphism::identity(xy);
  CHECK(apply(id, w({X, Yi, X})) == w({X, Yi, X}));
}

TEST_CASE("compose and endo_power", "[word]") {
  const Alphabet x1({"x"});
  auto sq = FreeEndomorphism(x1, {Word(x1, {X, X})});
  CHECK(compose(sq, sq).images()[0] == Word(x1, {X, X, X, X}));
  CHECK(endo_power(sq, 3).images()[0].length() == 8);

  auto phi = stallings_example();
  CHECK(compose(FreeEndomorphism::identity(xy), phi) == phi);
  CHECK(endo_power(phi, 1) == phi);
  CHECK(compose(phi, FreeEndomorphism::trivial(xy)) == FreeEndomorphism::trivial(xy));

  // phi^2(x) = phi(x y^2) = x y^2 (x^2 y^3)^2, no cancellation.
  auto sq2 = endo_power(phi, 2);
  auto x2 = w({X, Y, Y, X, X, Y, Y, Y, X, X, Y, Y, Y});
  CHECK(sq2.images()[0] == x2);
  // phi^2(y) = (x y^2)^2 (x^2 y^3)^3.
  std::vector<Letter> y2;
  for (int i = 0; i < 2; ++i) y2.insert(y2.end(), {X, Y, Y});
  for (int i = 0; i < 3; ++i) y2.insert(y2.end(), {X, X, Y, Y, Y});
  CHECK(sq2.images()[1] == Word(xy, y2));
  CHECK_THROWS_AS(endo_power(phi, 0), InvalidArgument);
}

TEST_CASE("conjugator is folded into effective images", "[word]") {
  auto phi = FreeEndomorphism(xy, {w({X}), w({Y})}, w({Y}));
  CHECK(phi.effective_image(0) == w({Y, X, Yi}));
  CHECK(apply(phi, w({X, Y})) == w({Y, X, Y, Yi}));
  auto folded = endo_power(phi, 1);
  CHECK(folded.conjugator().is_identity());
  CHECK(folded.images()[0] == w({Y, X, Yi}));
}

TEST_CASE("word blowup is reported", "[word]") {
  const Alphabet x1({"x"});
  auto sq = FreeEndomorphism(x1, {Word(x1, {X, X})});
  CHECK_THROWS_AS(endo_power(sq, 20, 1'000'000), WordBlowup);
  CHECK_NOTHROW(endo_power(sq, 19, 1'000'000));
  CHECK_THROWS_AS(apply(sq, Word(x1, {X, X, X}), 5), WordBlowup);
}

TEST_CASE("group laws on random words", "[word][property]") {
  Rng rng(12345);
  const Alphabet abc({"a", "b", "c"});
  for (int trial = 0; trial < 500; ++trial) {
    auto raw = shapeq::testing::random_letters(rng, 3, 12);
    Word r(abc, raw);
    CHECK(Word(abc, r.letters()) == r);

    Word u = shapeq::testing::random_word(rng, abc, 6);
    Word v = shapeq::testing::random_word(rng, abc, 6);
    Word t = shapeq::testing::random_word(rng, abc, 6);
    CHECK(multiply(multiply(u, v), t) == multiply(u, multiply(v, t)));
    CHECK(invert(multiply(u, v)) == multiply(invert(v), invert(u)));
    CHECK(multiply(u, invert(u)).is_identity());
    CHECK(invert(invert(u)) == u);
  }
}

TEST_CASE("apply is a homomorphism and respects conjugation", "[word][property]") {
  Rng rng(777);
  const Alphabet abc({"a", "b", "c"});
  for (int trial = 0; trial < 300; ++trial) {
    auto phi0 = shapeq::testing::random_endomorphism(rng, abc, 4);
    Word c = shapeq::testing::random_word(rng, abc, 3);
    auto phi = phi0.with_conjugator(c);
    Word u = shapeq::testing::random_word(rng, abc, 5);
    Word v = shapeq::testing::random_word(rng, abc, 5);
    CHECK(apply(phi, multiply(u, v)) == multiply(apply(phi, u), apply(phi, v)));
    CHECK(apply(phi, u) == multiply(multiply(c, apply(phi0, u)), invert(c)));
    CHECK(apply(compose(phi, phi0), u) == apply(phi, apply(phi0, u)));
  }
}
