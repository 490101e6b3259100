#include "tcg/cumulant.hpp"

#include <cmath>

namespace tcg {

TruncationPolicy resolve_policy(const TruncationPolicy& p, const WindowSpec& win, double scale) {
  TruncationPolicy r = p;
  if (r.n_max < 1) throw DomainError("truncation policy needs n_max >= 1");
  if (r.slow_cutoff < 0.0)
    r.slow_cutoff = win.kind == WindowKind::delta ? std::numeric_limits<double>::infinity()
                                                  : 2.0 / win.tau;
  if (r.coeff_floor < 0.0) r.coeff_floor = 1e-12 * (scale > 0.0 ? scale : 1.0);
  return r;
}

void check_size(std::size_t alphabet, int n_max) {
  if (std::pow(double(alphabet), double(n_max)) > kMaxWordCount)
    throw SizeLimitError("word count " + std::to_string(alphabet) + "^" + std::to_string(n_max) +
                         " exceeds the limit of 1e6");
}

namespace {

int word_grade(const Word& w, const std::vector<int>& grades) {
  if (grades.empty()) return 0;
  int g = 0;
  for (Letter l : w) g += grades.at(l);
  return g;
}

}  // namespace

// ------------------------------------------------------------- moments

MomentTable::MomentTable(std::vector<ExpPoly> f, WindowSpec win)
    : f_(std::move(f)), win_(win) {
  if (f_.empty()) throw DomainError("MomentTable: empty alphabet");
}

void MomentTable::ensure(const Word& w) {
  if (w.empty()) throw DomainError("MomentTable: empty word");
  if (m_.count(w)) return;
  const Letter first = w[0];
  if (first >= f_.size()) throw DomainError("MomentTable: letter outside alphabet");
  ExpPoly s;
  if (w.size() == 1) {
    s = antiderivative(f_[first]);
  } else {
    const Word tail = subword(w, 1, w.size());
    ensure(tail);
    s = antiderivative(f_[first] * s_.at(tail));
  }
  ExpPoly m = average(win_, s);
  md_.emplace(w, derivative(m));
  m_.emplace(w, std::move(m));
  s_.emplace(w, std::move(s));
}

void MomentTable::populate(int n_max, const std::vector<int>& grades, int grade_max) {
  if (!grades.empty() && grades.size() != f_.size())
    throw DomainError("MomentTable: grade vector does not match alphabet");
  for (int n = 1; n <= n_max; ++n)
    for (const auto& w : all_words(static_cast<int>(f_.size()), n))
      if (grade_max < 0 || word_grade(w, grades) <= grade_max) ensure(w);
}

const ExpPoly& MomentTable::M(const Word& w) const {
  auto it = m_.find(w);
  if (it == m_.end()) throw IncompleteTable("moment missing for word " + to_string(w));
  return it->second;
}

const ExpPoly& MomentTable::Mdot(const Word& w) const {
  auto it = md_.find(w);
  if (it == md_.end()) throw IncompleteTable("moment derivative missing for word " + to_string(w));
  return it->second;
}

const ExpPoly& MomentTable::S(const Word& w) const {
  auto it = s_.find(w);
  if (it == s_.end()) throw IncompleteTable("nested integral missing for word " + to_string(w));
  return it->second;
}

void MomentTable::erase(const Word& w) {
  m_.erase(w);
  md_.erase(w);
  s_.erase(w);
}

std::vector<Word> MomentTable::words(int n) const {
  std::vector<Word> out;
  for (const auto& [w, m] : m_)
    if (static_cast<int>(w.size()) == n) out.push_back(w);
  return out;
}

ExpPoly ordered_moment(const Word& w, const std::vector<ExpPoly>& f, const WindowSpec& win) {
  if (w.empty()) throw DomainError("ordered_moment: empty word");
  ExpPoly s = ExpPoly::constant(1.0);
  for (std::size_t i = w.size(); i-- > 0;) s = antiderivative(f.at(w[i]) * s);
  return average(win, s);
}

ExpPoly harmonic_moment(const std::vector<double>& freqs, const WindowSpec& win) {
  if (freqs.empty()) throw DomainError("harmonic_moment: empty word");
  cplx c = 1.0;
  double tail = 0.0;
  for (std::size_t i = freqs.size(); i-- > 0;) {
    tail += freqs[i];
    if (std::abs(tail) <= kFreqTol)
      throw DomainError("harmonic_moment: vanishing tail partial sum");
    c *= cplx(0.0, 1.0) / tail;
  }
  return average(win, ExpPoly::harmonic(tail, c));
}

// ----------------------------------------------------------- cumulants

ExpPoly signature_cumulant(const Word& w, const MomentTable& moments, WordSeries* known) {
  if (w.empty()) throw DomainError("signature_cumulant: empty word");
  if (known) {
    auto it = known->find(w);
    if (it != known->end()) return it->second;
  }
  ExpPoly u = moments.Mdot(w);
  for (std::size_t m = 1; m < w.size(); ++m) {
    const Word head = subword(w, 0, m);
    const ExpPoly uh = signature_cumulant(head, moments, known);
    u -= uh * moments.M(subword(w, m, w.size()));
  }
  if (known) known->emplace(w, u);
  return u;
}

ExpPoly signature_cumulant_closed(const Word& w, const MomentTable& moments) {
  if (w.empty()) throw DomainError("signature_cumulant_closed: empty word");
  ExpPoly u;
  for (const auto& part : ordered_partitions(w)) {
    ExpPoly term = moments.Mdot(part[0]);
    for (std::size_t b = 1; b < part.size(); ++b) term = term * moments.M(part[b]);
    u += (part.size() % 2 == 1) ? term : term * cplx(-1.0);
  }
  return u;
}

CumulantTable compute_cumulants(const MomentTable& moments, int n_max) {
  CumulantTable t;
  t.n_max = n_max;
  for (int n = 1; n <= n_max; ++n)
    for (const auto& w : moments.words(n)) signature_cumulant(w, moments, &t.u);
  return t;
}

// -------------------------------------------------------------- Magnus

ExpPoly magnus_word_cumulant(const Word& w, const MomentTable& moments) {
  if (w.empty()) throw DomainError("magnus_word_cumulant: empty word");
  const int n = static_cast<int>(w.size());
  ExpPoly k;
  for (int blocks = 1; blocks <= n; ++blocks) {
    const double sign = (blocks % 2 == 1) ? 1.0 : -1.0;
    for (const auto& comp : compositions(n, blocks)) {
      const auto part = split(w, comp);
      ExpPoly term = moments.M(part[0]);
      for (std::size_t b = 1; b < part.size(); ++b) term = term * moments.M(part[b]);
      k += term * cplx(sign / blocks);
    }
  }
  return k;
}

WordSeries magnus_cumulant(int n, const MomentTable& moments) {
  WordSeries out;
  for (const auto& w : moments.words(n)) out.emplace(w, magnus_word_cumulant(w, moments));
  return out;
}

namespace {

WordSeries series_product(const WordSeries& a, const WordSeries& b, std::size_t max_len) {
  WordSeries out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      if (wa.size() + wb.size() > max_len) continue;
      out[concat(wa, wb)] += ca * cb;
    }
  return out;
}

void series_axpy(WordSeries& acc, const WordSeries& x, cplx s) {
  for (const auto& [w, c] : x) acc[w] += c * s;
}

}  // namespace

WordSeries magnus_generator_words(const WordSeries& k, int n_max, int grade_max) {
  const std::size_t len = static_cast<std::size_t>(n_max);
  WordSeries kdot;
  for (const auto& [w, c] : k)
    if (w.size() <= len) kdot.emplace(w, derivative(c));
  WordSeries u = kdot;
  WordSeries ad = kdot;
  double fact = 1.0;
  for (int m = 1; m <= grade_max; ++m) {
    WordSeries next = series_product(k, ad, len);
    series_axpy(next, series_product(ad, k, len), -1.0);
    ad = std::move(next);
    if (ad.empty()) break;
    fact *= double(m + 1);
    series_axpy(u, ad, 1.0 / fact);
  }
  for (auto it = u.begin(); it != u.end();) it = it->second.empty() ? u.erase(it) : std::next(it);
  return u;
}

// ---------------------------------------------------------- truncation

TruncatedTable truncate_table(const WordSeries& u, int n_max, const TruncationPolicy& policy,
                              const WindowSpec& win, const std::vector<int>& grades) {
  double scale = 0.0;
  for (const auto& [w, c] : u)
    if (w.size() == 1) scale = std::max(scale, c.max_abs_coeff());
  TruncatedTable t;
  t.policy = resolve_policy(policy, win, scale);
  t.orders.resize(static_cast<std::size_t>(n_max));
  for (const auto& [w, c] : u) {
    if (w.empty() || static_cast<int>(w.size()) > n_max) continue;
    if (t.policy.grade_max >= 0 && word_grade(w, grades) > t.policy.grade_max) continue;
    ExpPoly kept = c.truncated(t.policy.slow_cutoff, t.policy.coeff_floor);
    if (!kept.empty()) t.orders[w.size() - 1].emplace_back(w, std::move(kept));
  }
  return t;
}

}  // namespace tcg
