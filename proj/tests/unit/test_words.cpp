// free-group words and conjugacy classes against brute-force enumeration:
// the closed-form counts, the canonical cores, and the necklace streaming
// are all replayed here with independent, naive implementations.

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/words.hpp"

using namespace anosov;

namespace {

Word w(const std::string& s, int rank = 2) { return Word::from_string(s, rank); }

// naive cyclic reduction: repeatedly strip matching first/last letters
std::vector<Letter> naive_cyclic_core(std::vector<Letter> v) {
  while (v.size() >= 2 && v.front() == inverse_letter(v.back())) {
    v.erase(v.begin());
    v.pop_back();
  }
  return v;
}

// canonical representative: lexicographically least rotation
std::vector<Letter> least_rotation(const std::vector<Letter>& v) {
  std::vector<Letter> best = v;
  for (size_t r = 1; r < v.size(); ++r) {
    std::vector<Letter> rot(v.begin() + static_cast<long>(r), v.end());
    rot.insert(rot.end(), v.begin(), v.begin() + static_cast<long>(r));
    if (rot < best) best = rot;
  }
  return best;
}

bool naive_primitive(const std::vector<Letter>& v) {
  const size_t n = v.size();
  for (size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (size_t i = 0; i + p < n && periodic; ++i) periodic = v[i] == v[i + p];
    if (periodic) return false;
  }
  return true;
}

// every freely reduced word of length <= max_len, collected naively
std::vector<std::vector<Letter>> all_reduced_words(int rank, int max_len) {
  std::vector<std::vector<Letter>> out, frontier;
  for (Letter a = 0; a < 2 * rank; ++a) frontier.push_back({a});
  for (int len = 1; len <= max_len; ++len) {
    out.insert(out.end(), frontier.begin(), frontier.end());
    if (len == max_len) break;
    std::vector<std::vector<Letter>> next;
    for (const auto& v : frontier)
      for (Letter a = 0; a < 2 * rank; ++a) {
        if (a == inverse_letter(v.back())) continue;
        std::vector<Letter> ext = v;
        ext.push_back(a);
        next.push_back(std::move(ext));
      }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("letter codes: inverses and string round trip") {
  CHECK(inverse_letter(0) == 1);
  CHECK(inverse_letter(3) == 2);
  CHECK(letter_gen(5) == 2);
  const Word word = w("abAB");
  REQUIRE(word.length() == 4);
  CHECK(word.letters == std::vector<Letter>{0, 2, 1, 3});
  CHECK(word.str() == "abAB");
  CHECK(word.reduced());
  CHECK_THROWS_AS((void)Word::from_string("abc", 2), ConfigError);
  CHECK_THROWS_AS((void)Word::from_string("a b", 2), ConfigError);
}

TEST_CASE("free reduction cancels adjacent inverse pairs") {
  CHECK(reduce(w("abBA")).length() == 0);
  CHECK(reduce(w("abBa")).str() == "aa");
  CHECK_FALSE(w("aA").reduced());
  CHECK(concat(w("ab"), w("BA")).length() == 0);
  CHECK(concat(w("ab"), w("Ba")).str() == "aa");
  const Word v = w("aBab");
  CHECK(concat(v, inverse_word(v)).length() == 0);
  CHECK(inverse_word(v).str() == "BAbA");
}

TEST_CASE("cyclic reduction strips conjugating collars") {
  CHECK(cyclic_reduce(w("Aba")).str() == "b");
  CHECK(cyclic_reduce(w("BAbab")).str() == "b");
  CHECK(cyclic_reduce(w("ab")).str() == "ab");
  // a full conjugate of a commutator comes back to a rotation of its core
  const Word conj = reduce(concat(concat(w("bab"), w("abAB")), inverse_word(w("bab"))));
  const std::vector<Letter> core = naive_cyclic_core(conj.letters);
  CHECK(least_rotation(core) == least_rotation(w("abAB").letters));
}

TEST_CASE("conjugacy class cores are canonical and conjugation invariant") {
  const ConjClass ab = ConjClass::of(w("ab"));
  CHECK(ab.core.str() == "ab");
  CHECK(ab.primitive);
  CHECK(ConjClass::of(w("ba")).core.str() == "ab");

  const ConjClass sq = ConjClass::of(w("abab"));
  CHECK(sq.core.str() == "abab");
  CHECK_FALSE(sq.primitive);
  CHECK_FALSE(ConjClass::of(w("aaa")).primitive);

  // conjugation by arbitrary words leaves the canonical core fixed
  for (const char* outer : {"a", "Ba", "bbA", "abab"}) {
    const Word u = w(outer);
    const Word word = reduce(concat(concat(u, w("aBa")), inverse_word(u)));
    CHECK(ConjClass::of(word).core.str() == ConjClass::of(w("aBa")).core.str());
  }
}

TEST_CASE("element scan agrees with the closed-form count") {
  for (int rank : {1, 2, 3}) {
    for (int max_len : {1, 3, 6}) {
      std::uint64_t pushes = 0;
      ElementVisitor v;
      v.push = [&pushes](Letter, int) { ++pushes; };
      v.pop = [] {};
      scan_elements(rank, max_len, 1ull << 24, v);
      CHECK(pushes == count_elements(rank, max_len));
    }
  }
}

TEST_CASE("scan visits words in lexicographic depth-first order") {
  std::vector<Letter> current;
  std::vector<std::string> at_depth_2;
  ElementVisitor v;
  v.push = [&](Letter a, int len) {
    current.push_back(a);
    REQUIRE(static_cast<int>(current.size()) == len);
    if (len == 2) at_depth_2.push_back(letters_str(current));
  };
  v.pop = [&] { current.pop_back(); };
  scan_elements(2, 2, 1ull << 16, v);
  REQUIRE(at_depth_2.size() == 12);  // 4 * 3 reduced two-letter words
  CHECK(std::is_sorted(at_depth_2.begin(), at_depth_2.end()));
  CHECK(at_depth_2.front() == "aa");
  CHECK(std::set<std::string>(at_depth_2.begin(), at_depth_2.end()).count("aA") == 0);
}

TEST_CASE("cyclically reduced word count matches the closed form") {
  for (int rank : {2, 3}) {
    const auto words = all_reduced_words(rank, 6);
    std::vector<std::uint64_t> by_len(7, 0);
    for (const auto& v : words) {
      const bool cyclic = v.size() == 1 || v.front() != inverse_letter(v.back());
      if (cyclic) ++by_len[v.size()];
    }
    for (int n = 1; n <= 6; ++n) CHECK(by_len[static_cast<size_t>(n)] == count_cyclic_words(rank, n));
  }
}

TEST_CASE("class enumeration matches a brute-force necklace census") {
  const int rank = 2, max_len = 6;
  std::map<std::string, bool> census;  // canonical core -> primitive
  for (const auto& v : all_reduced_words(rank, max_len)) {
    const std::vector<Letter> core = naive_cyclic_core(v);
    if (core.empty() || core.size() > static_cast<size_t>(max_len)) continue;
    const std::vector<Letter> canon = least_rotation(core);
    census.emplace(letters_str(canon), naive_primitive(canon));
  }

  const ClassList all = ClassList::enumerate(rank, max_len, false, 1ull << 24);
  REQUIRE(all.size() == census.size());
  std::size_t primitive_count = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto core = all.core(i);
    const auto it = census.find(letters_str(core));
    REQUIRE(it != census.end());
    CHECK(it->second == all.primitive(i));
    primitive_count += all.primitive(i);
    // stored cores are canonical: re-canonicalizing is the identity
    const std::vector<Letter> again(core.begin(), core.end());
    CHECK(least_rotation(naive_cyclic_core(again)) == again);
    CHECK(all.name(i) == letters_str(core));
  }

  const ClassList prim = ClassList::enumerate(rank, max_len, true, 1ull << 24);
  CHECK(prim.size() == primitive_count);
  for (std::size_t i = 0; i < prim.size(); ++i) CHECK(prim.primitive(i));
}

TEST_CASE("class streaming is ordered by length then letters") {
  std::vector<std::string> names;
  enumerate_conjugacy_classes(2, 5, true, 1ull << 24,
                              [&](std::span<const Letter> core, bool primitive) {
                                CHECK(primitive);
                                names.push_back(letters_str(core));
                                return true;
                              });
  REQUIRE(names.size() >= 10);
  for (size_t i = 1; i < names.size(); ++i) {
    const bool len_ok = names[i - 1].size() < names[i].size() ||
                        (names[i - 1].size() == names[i].size() && names[i - 1] < names[i]);
    CHECK(len_ok);
  }
  // early stop: the callback's return value is honored
  int seen = 0;
  enumerate_conjugacy_classes(2, 5, true, 1ull << 24,
                              [&](std::span<const Letter>, bool) { return ++seen < 5; });
  CHECK(seen == 5);
}

TEST_CASE("budget guards throw instead of running away") {
  ElementVisitor v;
  v.push = [](Letter, int) {};
  v.pop = [] {};
  CHECK_THROWS_AS(scan_elements(2, 16, 100, v), BudgetError);
  CHECK_THROWS_AS((void)ClassList::enumerate(2, 14, true, 50), BudgetError);
}
