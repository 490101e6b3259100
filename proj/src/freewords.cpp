#include "tcg/freewords.hpp"

#include <sstream>

namespace tcg {

Word concat(const Word& a, const Word& b) {
  Word out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word subword(const Word& w, std::size_t begin, std::size_t end) {
  return Word(w.begin() + static_cast<std::ptrdiff_t>(begin),
              w.begin() + static_cast<std::ptrdiff_t>(end));
}

std::string to_string(const Word& w) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << w[i];
  }
  os << ')';
  return os.str();
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

void compose_rec(int remaining, int slots, Composition& cur,
                 std::vector<Composition>& out) {
  if (slots == 1) {
    cur.push_back(remaining);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int first = 1; first <= remaining - (slots - 1); ++first) {
    cur.push_back(first);
    compose_rec(remaining - first, slots - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Composition> compositions(int n, int k) {
  if (n < 1 || k < 1 || k > n)
    throw DomainError("compositions: need 1 <= k <= n, got n=" +
                      std::to_string(n) + " k=" + std::to_string(k));
  std::vector<Composition> out;
  Composition cur;
  compose_rec(n, k, cur, out);
  return out;
}

OrderedPartition split(const Word& w, const Composition& parts) {
  OrderedPartition blocks;
  std::size_t pos = 0;
  for (int len : parts) {
    blocks.push_back(subword(w, pos, pos + static_cast<std::size_t>(len)));
    pos += static_cast<std::size_t>(len);
  }
  if (pos != w.size()) throw DomainError("split: parts do not sum to length");
  return blocks;
}

std::vector<OrderedPartition> ordered_partitions(const Word& w) {
  if (w.empty()) throw DomainError("ordered_partitions: empty word");
  const int n = static_cast<int>(w.size());
  std::vector<OrderedPartition> out;
  for (int k = 1; k <= n; ++k)
    for (const auto& c : compositions(n, k)) out.push_back(split(w, c));
  return out;
}

WordSum dynkin_expand(const Word& w) {
  if (w.empty()) throw DomainError("dynkin_expand: empty word");
  const std::size_t n = w.size();
  // Build [w_{n-1}, w_n] outward; each bracket doubles the term set.
  WordSum acc{{Word{w[n - 1]}, Rational(1)}};
  for (std::size_t i = n - 1; i-- > 0;) {
    WordSum next;
    for (const auto& [v, c] : acc) {
      next[concat(Word{w[i]}, v)] += c;
      next[concat(v, Word{w[i]})] -= c;
    }
    acc.clear();
    for (auto& [v, c] : next)
      if (c != Rational(0)) acc.emplace(v, c);
  }
  WordSum out;
  for (const auto& [v, c] : acc) out.emplace(v, c / static_cast<long long>(n));
  return out;
}

WordSum dynkin_apply(const WordSum& s) {
  WordSum out;
  for (const auto& [w, c] : s)
    for (const auto& [v, d] : dynkin_expand(w)) out[v] += c * d;
  for (auto it = out.begin(); it != out.end();)
    it = it->second == Rational(0) ? out.erase(it) : std::next(it);
  return out;
}

std::vector<Word> all_words(int alphabet_size, int n) {
  std::vector<Word> out;
  if (n <= 0 || alphabet_size <= 0) return out;
  Word cur(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(cur);
    int pos = n - 1;
    while (pos >= 0 && cur[static_cast<std::size_t>(pos)] + 1 == alphabet_size) {
      cur[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++cur[static_cast<std::size_t>(pos)];
  }
  return out;
}

}  // namespace tcg
