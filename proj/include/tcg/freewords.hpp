// Words over a finite alphabet: compositions, ordered partitions and the
// right-nested Dynkin bracket expansion.
#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcg {

using Letter = std::uint16_t;
using Word = std::vector<Letter>;
using Rational = boost::rational<long long>;
using Composition = std::vector<int>;

// Ordered blocks whose concatenation is the parent word.
using OrderedPartition = std::vector<Word>;

// Weighted formal sum of words with exact coefficients.
using WordSum = std::map<Word, Rational>;

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Word concat(const Word& a, const Word& b);
Word subword(const Word& w, std::size_t begin, std::size_t end);
std::string to_string(const Word& w);

long long binomial(int n, int k);

// All compositions of n into exactly k positive parts, lexicographic.
std::vector<Composition> compositions(int n, int k);

// All contiguous block decompositions of w, grouped by block count
// (1 block first) and lexicographic in the cut positions within a group.
std::vector<OrderedPartition> ordered_partitions(const Word& w);

// Splits w into blocks of the given sizes.
OrderedPartition split(const Word& w, const Composition& parts);

// (1/n)[w1,[w2,[...,[w_{n-1},w_n]]]] expanded into words.
WordSum dynkin_expand(const Word& w);

// Linear extension of dynkin_expand over a weighted sum.
WordSum dynkin_apply(const WordSum& s);

// All words of length n over an alphabet of the given size, lexicographic.
std::vector<Word> all_words(int alphabet_size, int n);

}  // namespace tcg
