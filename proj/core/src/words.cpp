#include "anosov/words.hpp"

#include <algorithm>

namespace anosov {

namespace {

void check_rank(int rank) {
  if (rank < 1 || rank > 26) throw ConfigError("rank must be between 1 and 26");
}

char letter_char(Letter a) {
  const int g = letter_gen(a);
  return (a & 1) ? static_cast<char>('A' + g) : static_cast<char>('a' + g);
}

}  // namespace

std::string letters_str(std::span<const Letter> w) {
  std::string s;
  s.reserve(w.size());
  for (Letter a : w) s.push_back(letter_char(a));
  return s;
}

Word Word::from_string(const std::string& s, int rank) {
  check_rank(rank);
  Word w;
  w.letters.reserve(s.size());
  for (char c : s) {
    Letter a;
    if (c >= 'a' && c <= 'z') a = static_cast<Letter>(2 * (c - 'a'));
    else if (c >= 'A' && c <= 'Z') a = static_cast<Letter>(2 * (c - 'A') + 1);
    else throw ConfigError(std::string("bad letter '") + c + "' in word");
    if (letter_gen(a) >= rank) throw ConfigError(std::string("letter '") + c + "' exceeds rank");
    w.letters.push_back(a);
  }
  return w;
}

std::string Word::str() const { return letters_str(letters); }

bool Word::reduced() const {
  for (size_t i = 1; i < letters.size(); ++i)
    if (letters[i] == inverse_letter(letters[i - 1])) return false;
  return true;
}

Word reduce(const Word& w) {
  Word r;
  r.letters.reserve(w.letters.size());
  for (Letter a : w.letters) {
    if (!r.letters.empty() && r.letters.back() == inverse_letter(a)) r.letters.pop_back();
    else r.letters.push_back(a);
  }
  return r;
}

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
  return reduce(r);
}

Word inverse_word(const Word& w) {
  Word r;
  r.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    r.letters.push_back(inverse_letter(*it));
  return r;
}

Word cyclic_reduce(const Word& w) {
  Word r = reduce(w);
  size_t b = 0, e = r.letters.size();
  while (e > b + 1 && r.letters[b] == inverse_letter(r.letters[e - 1])) {
    ++b;
    --e;
  }
  Word out;
  out.letters.assign(r.letters.begin() + static_cast<std::ptrdiff_t>(b),
                     r.letters.begin() + static_cast<std::ptrdiff_t>(e));
  return out;
}

ConjClass ConjClass::of(const Word& w) {
  Word core = cyclic_reduce(w);
  const size_t n = core.letters.size();
  if (n == 0) return {core, false};
  // least rotation (cores are short on this path; a linear-time scheme is not needed)
  size_t best = 0;
  for (size_t r = 1; r < n; ++r) {
    for (size_t i = 0; i < n; ++i) {
      const Letter x = core.letters[(r + i) % n], y = core.letters[(best + i) % n];
      if (x != y) {
        if (x < y) best = r;
        break;
      }
    }
  }
  Word rot;
  rot.letters.reserve(n);
  for (size_t i = 0; i < n; ++i) rot.letters.push_back(core.letters[(best + i) % n]);
  // primitive iff no proper string period divides n
  bool primitive = true;
  for (size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool period = true;
    for (size_t i = p; i < n && period; ++i) period = rot.letters[i] == rot.letters[i - p];
    if (period) {
      primitive = false;
      break;
    }
  }
  return {rot, primitive};
}

std::uint64_t count_elements(int rank, int max_len) {
  check_rank(rank);
  const std::uint64_t k2 = 2ull * static_cast<std::uint64_t>(rank);
  std::uint64_t total = 0, layer = k2;
  for (int n = 1; n <= max_len; ++n) {
    total += layer;
    if (layer > (1ull << 62) / (k2 - 1 + (k2 == 1))) throw BudgetError("element count overflow");
    layer *= (k2 - 1);
  }
  return total;
}

std::uint64_t count_cyclic_words(int rank, int n) {
  check_rank(rank);
  const std::uint64_t q = 2ull * static_cast<std::uint64_t>(rank) - 1;
  std::uint64_t pw = 1;
  for (int i = 0; i < n; ++i) {
    if (pw > (1ull << 62) / (q + (q == 0))) throw BudgetError("cyclic word count overflow");
    pw *= q;
  }
  const std::uint64_t even_extra = (n % 2 == 0) ? 2ull * static_cast<std::uint64_t>(rank - 1) : 0;
  return pw + 1 + even_extra;
}

void scan_elements(int rank, int max_len, std::uint64_t budget, const ElementVisitor& v) {
  check_rank(rank);
  if (max_len < 1) return;
  const std::uint64_t total = count_elements(rank, max_len);
  if (total > budget) throw BudgetError("element scan: " + std::to_string(total) +
                                        " words exceed budget " + std::to_string(budget));
  const int nl = 2 * rank;
  std::vector<Letter> stack(static_cast<size_t>(max_len));
  // iterative DFS in lexicographic order
  int depth = 0;
  Letter next = 0;
  while (true) {
    if (next < nl && depth < max_len) {
      const bool blocked = depth > 0 && next == inverse_letter(stack[static_cast<size_t>(depth - 1)]);
      if (!blocked) {
        stack[static_cast<size_t>(depth)] = next;
        ++depth;
        v.push(next, depth);
        next = 0;
        continue;
      }
      ++next;
      continue;
    }
    if (depth == 0) break;
    --depth;
    const Letter last = stack[static_cast<size_t>(depth)];
    v.pop();
    next = static_cast<Letter>(last + 1);
  }
}

namespace {

struct NecklaceGen {
  int n = 0;               // target length
  int nl = 0;              // alphabet size 2k
  std::vector<Letter> a;   // a[1..n]
  const std::function<bool(std::span<const Letter>, bool)>* visit = nullptr;
  bool primitive_only = false;
  bool stopped = false;

  bool ok_after(int t, Letter x) const {
    return t == 1 || x != inverse_letter(a[static_cast<size_t>(t - 1)]);
  }

  void gen(int t, int p) {
    if (stopped) return;
    if (t > n) {
      if (n % p != 0) return;
      const bool prim = p == n;
      if (primitive_only && !prim) return;
      // cyclic closure: last letter must not cancel the first
      if (a[static_cast<size_t>(n)] == inverse_letter(a[1])) return;
      if (!(*visit)(std::span<const Letter>(a.data() + 1, static_cast<size_t>(n)), prim)) stopped = true;
      return;
    }
    const Letter copy = a[static_cast<size_t>(t - p)];
    if (ok_after(t, copy)) {
      a[static_cast<size_t>(t)] = copy;
      gen(t + 1, p);
    }
    for (int j = copy + 1; j < nl; ++j) {
      const Letter x = static_cast<Letter>(j);
      if (!ok_after(t, x)) continue;
      a[static_cast<size_t>(t)] = x;
      gen(t + 1, t);
    }
  }
};

}  // namespace

void enumerate_conjugacy_classes(int rank, int max_len, bool primitive_only, std::uint64_t budget,
                                 const std::function<bool(std::span<const Letter>, bool)>& visit) {
  check_rank(rank);
  if (max_len < 1) throw ConfigError("class enumeration needs max_len >= 1");
  // pre-check the budget from the closed-form cyclic word counts
  std::uint64_t bound = 0;
  for (int n = 1; n <= max_len; ++n) {
    const std::uint64_t cw = count_cyclic_words(rank, n);
    bound += cw / static_cast<std::uint64_t>(n) + 1;
    if (bound > budget)
      throw BudgetError("class enumeration: about " + std::to_string(bound) +
                        " classes exceed budget " + std::to_string(budget));
  }
  NecklaceGen g;
  g.nl = 2 * rank;
  g.visit = &visit;
  g.primitive_only = primitive_only;
  for (int n = 1; n <= max_len && !g.stopped; ++n) {
    g.n = n;
    g.a.assign(static_cast<size_t>(n) + 1, 0);
    // first slot: every letter; FKM starts from the all-smallest string
    g.gen(1, 1);
  }
}

ClassList ClassList::enumerate(int rank, int max_len, bool primitive_only, std::uint64_t budget) {
  ClassList cl;
  cl.rank_ = rank;
  cl.max_len_ = max_len;
  cl.primitive_only_ = primitive_only;
  enumerate_conjugacy_classes(rank, max_len, primitive_only, budget,
                              [&](std::span<const Letter> w, bool prim) {
                                cl.letters_.insert(cl.letters_.end(), w.begin(), w.end());
                                cl.offsets_.push_back(static_cast<std::uint32_t>(cl.letters_.size()));
                                cl.primitive_.push_back(prim ? 1 : 0);
                                return true;
                              });
  return cl;
}

std::string ClassList::name(std::size_t i) const { return letters_str(core(i)); }

}  // namespace anosov
