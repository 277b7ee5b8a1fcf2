#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <tangles/core.hpp>

#include "support/oracle.hpp"

using namespace tangles;
using namespace tangles::testing;

namespace {
constexpr Sign P = Sign::positive;
constexpr Sign N = Sign::negative;
} // namespace

TEST_CASE("BitVector keeps the tail clear", "[bitvector]") {
  BitVector all(70, true);
  CHECK(all.count() == 70);
  CHECK((~all).none());
  BitVector some(70);
  some.set(0);
  some.set(69);
  CHECK((~some).count() == 68);
  CHECK(intersection_count(all, some) == 2);
  CHECK(intersection_count_at_least(all, some, all, 2));
  CHECK_FALSE(intersection_count_at_least(all, some, all, 3));
  CHECK(some.indices() == std::vector<std::size_t>{0, 69});
}

TEST_CASE("build_feature_system", "[core]") {
  SECTION("furniture fixture") {
    const auto fs = furniture4();
    CHECK(fs.object_count() == 4);
    CHECK(fs.feature_count() == 4);
  }
  SECTION("empty matrix") {
    const FeatureSystem fs({}, {});
    CHECK(fs.object_count() == 0);
    CHECK(fs.feature_count() == 0);
  }
  SECTION("zero features with rows") {
    const FeatureSystem fs({{}, {}, {}}, {});
    CHECK(fs.object_count() == 3);
    CHECK(fs.feature_count() == 0);
  }
  SECTION("constant column has an empty negative extent") {
    const FeatureSystem fs({{true}, {true}, {true}}, {"a"});
    CHECK(fs.extent(Orientation::negative(0)).none());
    CHECK(fs.extent(Orientation::positive(0)).count() == 3);
  }
  SECTION("ragged matrix") {
    CHECK_THROWS_AS(FeatureSystem({{true, false}, {true}}, {"a", "b"}), ValidationError);
  }
  SECTION("column count must match names") {
    CHECK_THROWS_AS(FeatureSystem({{true, false}}, {"a"}), ValidationError);
  }
  SECTION("duplicate names") {
    CHECK_THROWS_AS(FeatureSystem({{true, false}}, {"a", "a"}), ValidationError);
  }
}

TEST_CASE("extent", "[core]") {
  const auto fs = furniture4();
  CHECK(fs.extent(Orientation::positive(0)).indices() == std::vector<std::size_t>{0});
  CHECK(fs.extent(Orientation::negative(0)).indices() == std::vector<std::size_t>{1, 2, 3});
  CHECK_THROWS_AS(fs.extent(Orientation::positive(4)), std::out_of_range);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_matrix(1 + rng() % 90, 1 + rng() % 6, rng);
    const FeatureSystem rfs(m, default_names(m[0].size()));
    for (std::size_t s = 0; s < rfs.feature_count(); ++s) {
      const auto& pos = rfs.extent(Orientation::positive(s));
      const auto& neg = rfs.extent(Orientation::negative(s));
      REQUIRE(intersection_count(pos, neg) == 0);
      REQUIRE(pos.count() + neg.count() == rfs.object_count());
      for (std::size_t v = 0; v < rfs.object_count(); ++v)
        REQUIRE(pos.test(v) == m[v][s]);
    }
  }
}

TEST_CASE("specification_of", "[core]") {
  const auto fs = furniture4();
  CHECK(fs.specification_of(0) == Specification{P, N, N, N});
  CHECK(fs.specification_of(3) == Specification{N, N, N, P});
  CHECK(FeatureSystem({{true}}, {"a"}).specification_of(0) == Specification{P});
  CHECK_THROWS_AS(fs.specification_of(4), std::out_of_range);
}

TEST_CASE("agreement", "[core]") {
  const auto fs = furniture4();
  using O = Orientation;
  // Only v4 lacks all of p, q, r.
  CHECK(agreement(fs, {O::negative(0), O::negative(1), O::negative(2)}) == 1);
  // Wood and steel never occur together.
  CHECK(agreement(fs, {O::positive(0), O::positive(1)}) == 0);
  // Repetition collapses.
  CHECK(agreement(fs, {O::positive(0), O::positive(0), O::positive(0)}) == 1);
  CHECK(agreement(fs, {}) == 4);
  CHECK_THROWS_AS(agreement(fs, {O::positive(9)}), std::out_of_range);
}

TEST_CASE("agreement matches a row scan and is monotone", "[core][property]") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t objects = rng() % 40;
    const std::size_t features = 1 + rng() % 5;
    const auto m = random_matrix(objects, features, rng);
    const FeatureSystem fs(m, default_names(features));
    std::vector<Orientation> q;
    AgreementQuery query;
    std::size_t previous = fs.object_count();
    for (int k = 0; k < 3; ++k) {
      const Orientation o{rng() % features, (rng() & 1) ? P : N};
      q.push_back(o);
      query.push(o);
      const std::size_t value = agreement(fs, query);
      REQUIRE(value == naive_agreement(m, q));
      REQUIRE(value <= previous);
      previous = value;
      // Duplicating an orientation that is already present changes nothing.
      if (k < 2) {
        AgreementQuery dup = query;
        dup.push(o);
        REQUIRE(agreement(fs, dup) == value);
      }
    }
  }
}

TEST_CASE("is_consistent", "[core]") {
  const auto fs = furniture4();
  CHECK(is_consistent(fs, Specification{N, N, N, N}));
  CHECK_FALSE(is_consistent(fs, Specification{P, P, N, N}));
  for (std::size_t v = 0; v < fs.object_count(); ++v)
    CHECK(is_consistent(fs, fs.specification_of(v)));
}

TEST_CASE("agreement_value", "[core]") {
  const auto fs = furniture4();
  CHECK(agreement_value(fs, Specification{N, N, N, N}) == 1);
  CHECK(agreement_value(fs, Specification{P, N, N, N}) == 1);
  CHECK(agreement_value(FeatureSystem({{true}, {true}, {true}, {true}, {true}}, {"a"}), Specification{P}) == 5);
  // No features: the empty specification agrees with every object.
  CHECK(agreement_value(FeatureSystem({{}, {}}, {}), Specification{}) == 2);
  CHECK_THROWS_AS(agreement_value(fs, Specification{P}), ValidationError);
}

TEST_CASE("is_tangle", "[core]") {
  const auto fs = furniture4();
  CHECK(is_tangle(fs, Specification{N, N, N, N}, 1));
  CHECK_FALSE(is_tangle(fs, Specification{N, N, N, N}, 2));
  CHECK_FALSE(is_tangle(fs, Specification{P, P, N, N}, 1));
  CHECK_THROWS_AS(is_tangle(fs, Specification{N, N, N, N}, 0), ValidationError);

  SECTION("empty orientation never qualifies") {
    const FeatureSystem c({{true, false}, {true, true}}, {"a", "b"});
    CHECK_FALSE(is_tangle(c, Specification{N, N}, 1));
    CHECK(is_tangle(c, Specification{P, N}, 1));
  }
  SECTION("no features") {
    const FeatureSystem z({{}, {}, {}}, {});
    CHECK(is_tangle(z, Specification{}, 3));
    CHECK_FALSE(is_tangle(z, Specification{}, 4));
  }
}

TEST_CASE("agreement_value equals the brute-force minimum and bounds is_tangle", "[core][property]") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t objects = rng() % 25;
    const std::size_t features = 1 + rng() % 6;
    const auto m = random_matrix(objects, features, rng);
    const FeatureSystem fs(m, default_names(features));
    std::vector<Sign> signs(features);
    for (auto& s : signs)
      s = (rng() & 1) ? P : N;
    const Specification spec(signs);
    const std::size_t value = agreement_value(fs, spec);
    REQUIRE(value == naive_agreement_value(m, signs));
    REQUIRE(is_consistent(fs, spec) == is_tangle(fs, spec, 1));
    for (std::size_t n = 1; n <= objects + 1; ++n) {
      REQUIRE(is_tangle(fs, spec, n) == (value >= n));
      if (is_tangle(fs, spec, n + 1))
        REQUIRE(is_tangle(fs, spec, n));
    }
  }
}

TEST_CASE("Specification text form", "[core]") {
  CHECK(Specification::parse("+-+").to_string() == "+-+");
  CHECK(Specification::parse("") == Specification{});
  CHECK_THROWS_AS(Specification::parse("+x"), ValidationError);
  CHECK(Specification{P, N} < Specification{N, P});
}
