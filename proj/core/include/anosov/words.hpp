#pragma once

// words in the free group F_k and their conjugacy classes.
//
// letters are coded as int8: generator i (0-based) -> 2i, its inverse -> 2i+1,
// so inversion is xor 1 and the lexicographic order reads a < A < b < B < ...
// cyclically reduced words are exactly the strings with no factor x x^{-1},
// also cyclically; conjugacy classes of such words are rotation classes, so
// classes are enumerated as constrained necklaces (FKM scheme with the
// inverse-adjacency pruning). a class is primitive iff its core is not a
// proper power, which the enumeration reads off the period for free.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "anosov/errors.hpp"

namespace anosov {

using Letter = std::int8_t;

inline Letter inverse_letter(Letter a) { return static_cast<Letter>(a ^ 1); }
inline int letter_gen(Letter a) { return a >> 1; }

struct Word {
  std::vector<Letter> letters;

  static Word from_string(const std::string& s, int rank);
  std::string str() const;
  int length() const { return static_cast<int>(letters.size()); }
  bool reduced() const;
};

Word reduce(const Word& w);
Word concat(const Word& a, const Word& b);
Word inverse_word(const Word& w);
// strips matching first/last inverse pairs; result is cyclically reduced
Word cyclic_reduce(const Word& w);

struct ConjClass {
  Word core;       // lexicographically least rotation of the cyclically reduced core
  bool primitive;  // not a proper power in F_k
  static ConjClass of(const Word& w);
};

// sum over n <= max_len of 2k (2k-1)^{n-1}
std::uint64_t count_elements(int rank, int max_len);
// cyclically reduced words of length exactly n: (2k-1)^n + 1 + (k-1)(1+(-1)^n)
std::uint64_t count_cyclic_words(int rank, int n);

// depth-first scan of every nonempty freely reduced word of length <= max_len,
// children in lexicographic letter order. push is called when the word grows
// by one letter (current length passed), pop when it shrinks.
struct ElementVisitor {
  std::function<void(Letter, int)> push;
  std::function<void()> pop;
};
void scan_elements(int rank, int max_len, std::uint64_t budget, const ElementVisitor& v);

// canonical cores streamed by (length, lex) order; return false to stop early
void enumerate_conjugacy_classes(int rank, int max_len, bool primitive_only, std::uint64_t budget,
                                 const std::function<bool(std::span<const Letter>, bool)>& visit);

// flat packed store of all canonical cores up to max_len
class ClassList {
 public:
  static ClassList enumerate(int rank, int max_len, bool primitive_only, std::uint64_t budget);

  int rank() const { return rank_; }
  int max_len() const { return max_len_; }
  bool primitive_only() const { return primitive_only_; }
  std::size_t size() const { return offsets_.size() - 1; }
  std::span<const Letter> core(std::size_t i) const {
    return {letters_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  bool primitive(std::size_t i) const { return primitive_[i] != 0; }
  std::string name(std::size_t i) const;

 private:
  int rank_ = 0, max_len_ = 0;
  bool primitive_only_ = true;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<Letter> letters_;
  std::vector<std::uint8_t> primitive_;
};

std::string letters_str(std::span<const Letter> w);

}  // namespace anosov
