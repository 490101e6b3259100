// Ordered moments, signature cumulants (Dyson recursion, closed form and
// Magnus route) and assembly of the truncated effective generator.
#pragma once

#include "tcg/algebra.hpp"
#include "tcg/expavg.hpp"
#include "tcg/freewords.hpp"

#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcg {

class IncompleteTable : public DomainError {
 public:
  using DomainError::DomainError;
};

class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr double kMaxWordCount = 1e6;

// A model L(t) = sum_i f_i(t) L_i over a backend.
template <class E>
struct ModelSpec {
  std::string name;
  std::vector<ExpPoly> f;
  std::vector<E> ops;
  std::vector<std::string> letter_names;
  // Optional perturbative grade per letter (empty: all zero).
  std::vector<int> grades;

  std::size_t size() const { return f.size(); }
  E at(double t) const {
    E acc = zero_like(ops.at(0));
    for (std::size_t i = 0; i < f.size(); ++i) acc = add(acc, scale(ops[i], f[i](t)));
    return acc;
  }
};

struct TruncationPolicy {
  int n_max = 3;
  // Retain |freq| <= slow_cutoff; negative selects 2/tau (unbounded for delta).
  double slow_cutoff = -1.0;
  // Drop |coeff| < coeff_floor; negative selects 1e-12 times the order-1 scale.
  double coeff_floor = -1.0;
  // Words whose total letter grade exceeds grade_max are skipped (< 0: off).
  int grade_max = -1;
};

// Policy with defaults resolved for a window and a leading coefficient scale.
TruncationPolicy resolve_policy(const TruncationPolicy& p, const WindowSpec& win, double scale);

using WordSeries = std::map<Word, ExpPoly>;

// Moments M_w and their derivatives, built from unaveraged nested integrals.
class MomentTable {
 public:
  MomentTable(std::vector<ExpPoly> f, WindowSpec win);

  // Fills every word up to length n_max whose grade is within grade_max.
  void populate(int n_max, const std::vector<int>& grades = {}, int grade_max = -1);
  // Computes one word and all of its suffixes.
  void ensure(const Word& w);

  bool has(const Word& w) const { return m_.count(w) != 0; }
  const ExpPoly& M(const Word& w) const;
  const ExpPoly& Mdot(const Word& w) const;
  // Unaveraged nested integral with lower limit 0.
  const ExpPoly& S(const Word& w) const;
  void erase(const Word& w);
  // Populated words of length n, lexicographic.
  std::vector<Word> words(int n) const;

  const std::vector<ExpPoly>& letters() const { return f_; }
  const WindowSpec& window() const { return win_; }
  std::size_t size() const { return m_.size(); }

 private:
  std::vector<ExpPoly> f_;
  WindowSpec win_;
  WordSeries s_;
  WordSeries m_;
  WordSeries md_;
};

// M_w for a single word computed from scratch.
ExpPoly ordered_moment(const Word& w, const std::vector<ExpPoly>& f, const WindowSpec& win);

// Moment of pure harmonic letters with the lower integration limit sent to
// -infinity; requires all tail partial sums to be nonzero.
ExpPoly harmonic_moment(const std::vector<double>& freqs, const WindowSpec& win);

// U_w by the Dyson recursion; prefix cumulants are taken from `known` when
// present and computed otherwise.
ExpPoly signature_cumulant(const Word& w, const MomentTable& moments, WordSeries* known = nullptr);

// U_w as the alternating sum over ordered partitions with the first block
// differentiated.
ExpPoly signature_cumulant_closed(const Word& w, const MomentTable& moments);

// Untruncated U_w for every populated word, lexicographic within each length.
struct CumulantTable {
  int n_max = 0;
  WordSeries u;
};

CumulantTable compute_cumulants(const MomentTable& moments, int n_max);

// Magnus-route cumulant K_w = sum_k (-1)^{k+1}/k sum over compositions.
ExpPoly magnus_word_cumulant(const Word& w, const MomentTable& moments);

// All K_w of length n.
WordSeries magnus_cumulant(int n, const MomentTable& moments);

// U = sum_m ad_K^m(dK/dt)/(m+1)! in the free algebra, truncated at word
// length n_max and ad-grade grade_max.
WordSeries magnus_generator_words(const WordSeries& k, int n_max, int grade_max);

// Per-word truncated coefficients with the policy applied.
struct TruncatedTable {
  TruncationPolicy policy;
  std::vector<std::vector<std::pair<Word, ExpPoly>>> orders;  // index n-1
};

TruncatedTable truncate_table(const WordSeries& u, int n_max, const TruncationPolicy& policy,
                              const WindowSpec& win, const std::vector<int>& grades = {});

template <class E>
struct GeneratorTerm {
  Word word;
  ExpPoly coeff;
  E element;
};

template <class E>
struct GeneratorSeries {
  TruncationPolicy policy;
  std::vector<std::vector<GeneratorTerm<E>>> orders;  // index n-1
  E zero;

  int n_max() const { return static_cast<int>(orders.size()); }

  E order_element(int n, double t) const {
    E acc = zero;
    for (const auto& term : orders.at(static_cast<std::size_t>(n - 1)))
      acc = add(acc, scale(term.element, term.coeff(t)));
    return acc;
  }

  E evaluate(double t, int up_to = -1) const {
    const int top = up_to < 0 ? n_max() : std::min(up_to, n_max());
    E acc = zero;
    for (int n = 1; n <= top; ++n) acc = add(acc, order_element(n, t));
    return acc;
  }

  // Residual frequencies above the slow cutoff present in any coefficient.
  bool has_fast_terms() const {
    for (const auto& ord : orders)
      for (const auto& term : ord)
        for (const auto& tt : term.coeff.terms())
          if (std::abs(tt.freq) > policy.slow_cutoff) return true;
    return false;
  }
};

// Evaluates the truncated coefficients in a backend, memoizing word products
// by prefix.
template <class E>
GeneratorSeries<E> assemble(const TruncatedTable& table, const std::vector<E>& ops) {
  if (ops.empty()) throw DomainError("assemble: empty alphabet");
  GeneratorSeries<E> out;
  out.policy = table.policy;
  out.zero = zero_like(ops[0]);
  std::map<Word, E> memo;
  auto element = [&](const Word& w, auto&& self) -> E {
    if (w.size() == 1) return ops.at(w[0]);
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    const Word head = subword(w, 0, w.size() - 1);
    E e = compose(self(head, self), ops.at(w.back()));
    memo.emplace(w, e);
    return e;
  };
  for (const auto& ord : table.orders) {
    std::vector<GeneratorTerm<E>> terms;
    terms.reserve(ord.size());
    for (const auto& [w, c] : ord) terms.push_back({w, c, element(w, element)});
    out.orders.push_back(std::move(terms));
  }
  return out;
}

// Size guard on |alphabet|^n_max.
void check_size(std::size_t alphabet, int n_max);

// Dyson-route effective generator.
template <class E>
GeneratorSeries<E> effective_generator(const ModelSpec<E>& model, const WindowSpec& win,
                                       const TruncationPolicy& policy) {
  check_size(model.size(), policy.n_max);
  MomentTable moments(model.f, win);
  moments.populate(policy.n_max, model.grades, policy.grade_max);
  const CumulantTable cum = compute_cumulants(moments, policy.n_max);
  return assemble(truncate_table(cum.u, policy.n_max, policy, win, model.grades), model.ops);
}

// Magnus-route effective generator from the K series of all orders.
template <class E>
GeneratorSeries<E> magnus_generator(const ModelSpec<E>& model, const WindowSpec& win,
                                    const TruncationPolicy& policy, int grade_max = -1) {
  check_size(model.size(), policy.n_max);
  MomentTable moments(model.f, win);
  moments.populate(policy.n_max, model.grades, policy.grade_max);
  WordSeries k;
  for (int n = 1; n <= policy.n_max; ++n)
    for (auto& [w, c] : magnus_cumulant(n, moments)) k.emplace(w, std::move(c));
  const int g = grade_max < 0 ? policy.n_max - 1 : grade_max;
  const WordSeries u = magnus_generator_words(k, policy.n_max, g);
  return assemble(truncate_table(u, policy.n_max, policy, win, model.grades), model.ops);
}

}  // namespace tcg
