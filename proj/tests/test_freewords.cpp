#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tcg/freewords.hpp"

#include <algorithm>

using namespace tcg;

TEST_CASE("compositions small cases") {
  CHECK(compositions(3, 2) == std::vector<Composition>{{1, 2}, {2, 1}});
  CHECK(compositions(4, 1) == std::vector<Composition>{{4}});
  CHECK(compositions(5, 3).size() == 6);
}

TEST_CASE("compositions reject empty domain") {
  CHECK_THROWS_AS(compositions(2, 3), DomainError);
  CHECK_THROWS_AS(compositions(3, 0), DomainError);
}

TEST_CASE("composition counts are binomial") {
  for (int n = 1; n <= 10; ++n) {
    std::size_t total = 0;
    for (int k = 1; k <= n; ++k) {
      const auto cs = compositions(n, k);
      CHECK(cs.size() == static_cast<std::size_t>(binomial(n - 1, k - 1)));
      for (const auto& c : cs) {
        int sum = 0;
        for (int part : c) {
          CHECK(part >= 1);
          sum += part;
        }
        CHECK(sum == n);
      }
      CHECK(std::is_sorted(cs.begin(), cs.end()));
      total += cs.size();
    }
    CHECK(total == (std::size_t{1} << (n - 1)));
  }
}

TEST_CASE("ordered partitions") {
  const Word ab{0, 1};
  const auto ps = ordered_partitions(ab);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0] == OrderedPartition{{0, 1}});
  CHECK(ps[1] == OrderedPartition{{0}, {1}});
  CHECK(ordered_partitions(Word{0}) == std::vector<OrderedPartition>{{{0}}});
  CHECK(ordered_partitions(Word{0, 1, 2}).size() == 4);
  for (int n = 1; n <= 8; ++n) {
    Word w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = static_cast<Letter>(i % 3);
    const auto parts = ordered_partitions(w);
    CHECK(parts.size() == (std::size_t{1} << (n - 1)));
    for (const auto& p : parts) {
      Word joined;
      for (const auto& b : p) {
        CHECK(!b.empty());
        joined = concat(joined, b);
      }
      CHECK(joined == w);
    }
  }
}

TEST_CASE("dynkin expansion small cases") {
  CHECK(dynkin_expand(Word{0}) == WordSum{{Word{0}, Rational(1)}});
  CHECK(dynkin_expand(Word{0, 1}) ==
        WordSum{{Word{0, 1}, Rational(1, 2)}, {Word{1, 0}, Rational(-1, 2)}});
  // [a,[b,c]] = abc - acb - bca + cba
  const WordSum abc{{Word{0, 1, 2}, Rational(1, 3)},
                    {Word{0, 2, 1}, Rational(-1, 3)},
                    {Word{1, 2, 0}, Rational(-1, 3)},
                    {Word{2, 1, 0}, Rational(1, 3)}};
  CHECK(dynkin_expand(Word{0, 1, 2}) == abc);
  CHECK(dynkin_expand(Word{0, 0}).empty());
}

TEST_CASE("dynkin weights are +-1/n for distinct letters") {
  const Word w{0, 1, 2, 3, 4};
  const auto s = dynkin_expand(w);
  CHECK(s.size() == 16);
  for (const auto& [v, c] : s) CHECK(abs(c) == Rational(1, 5));
}

TEST_CASE("dynkin map is idempotent") {
  for (int n = 1; n <= 5; ++n) {
    for (const auto& w : all_words(2, n)) {
      const WordSum once = dynkin_expand(w);
      CHECK(dynkin_apply(once) == once);
    }
  }
  for (const auto& w : all_words(3, 4)) {
    const WordSum once = dynkin_expand(w);
    CHECK(dynkin_apply(once) == once);
  }
}

TEST_CASE("all words are lexicographic") {
  const auto ws = all_words(3, 3);
  CHECK(ws.size() == 27);
  CHECK(std::is_sorted(ws.begin(), ws.end()));
  CHECK(to_string(ws[5]) == "(0,1,2)");
}
