#include "adjbraid/exactla.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "adjbraid/errors.hpp"

namespace adjbraid {

Rational parse_rational(std::string_view text) {
  std::size_t i = 0;
  auto digits = [&](std::size_t from) {
    std::size_t j = from;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    return j;
  };
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  std::size_t end = digits(i);
  if (end == i) throw ParseError("expected digits in rational", i);
  if (end < text.size()) {
    if (text[end] != '/') throw ParseError("unexpected character in rational", end);
    std::size_t den_end = digits(end + 1);
    if (den_end == end + 1 || den_end != text.size()) throw ParseError("malformed denominator", end + 1);
  }
  std::string s(text[0] == '+' ? text.substr(1) : text);
  Rational q;
  if (q.set_str(s, 10) != 0) throw ParseError("malformed rational", 0);
  if (q.get_den() == 0) throw ParseError("zero denominator", end);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

// ---------------------------------------------------------------------------
// SparseVector

SparseVector SparseVector::from_dense(std::span<const Rational> dense) {
  SparseVector v;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (sgn(dense[i]) != 0) v.entries_.emplace(i, dense[i]);
  }
  return v;
}

const Rational* SparseVector::find(std::size_t col) const {
  auto it = entries_.find(col);
  return it == entries_.end() ? nullptr : &it->second;
}

Rational SparseVector::get(std::size_t col) const {
  const Rational* p = find(col);
  return p ? *p : Rational(0);
}

void SparseVector::set(std::size_t col, const Rational& v) {
  if (sgn(v) == 0) {
    entries_.erase(col);
  } else {
    entries_[col] = v;
  }
}

void SparseVector::add(std::size_t col, const Rational& v) {
  if (sgn(v) == 0) return;
  auto [it, inserted] = entries_.emplace(col, v);
  if (!inserted) {
    it->second += v;
    if (sgn(it->second) == 0) entries_.erase(it);
  }
}

SparseVector& SparseVector::operator+=(const SparseVector& o) {
  for (const auto& [c, v] : o.entries_) add(c, v);
  return *this;
}

SparseVector& SparseVector::operator-=(const SparseVector& o) {
  for (const auto& [c, v] : o.entries_) add(c, -v);
  return *this;
}

SparseVector& SparseVector::operator*=(const Rational& s) {
  if (sgn(s) == 0) {
    entries_.clear();
    return *this;
  }
  for (auto& [c, v] : entries_) v *= s;
  return *this;
}

Rational SparseVector::dot(std::span<const Rational> dense) const {
  Rational acc = 0;
  for (const auto& [c, v] : entries_) {
    if (c < dense.size()) acc += v * dense[c];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// RationalMatrix

RationalMatrix::RationalMatrix(std::size_t cols, std::vector<SparseVector> rows) : cols_(cols) {
  for (auto& r : rows) add_row(std::move(r));
}

RationalMatrix RationalMatrix::from_dense(const std::vector<std::vector<Rational>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RationalMatrix m(cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error("ragged dense matrix");
    m.add_row(SparseVector::from_dense(r));
  }
  return m;
}

void RationalMatrix::add_row(SparseVector r) {
  if (!r.empty() && r.entries().rbegin()->first >= cols_) throw Error("row entry outside the column basis");
  rows_.push_back(std::move(r));
}

RationalMatrix RationalMatrix::transpose() const {
  std::vector<SparseVector> cols(cols_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& [c, v] : rows_[i].entries()) cols[c].set(i, v);
  }
  return RationalMatrix(rows_.size(), std::move(cols));
}

SparseVector RationalMatrix::apply(const SparseVector& x) const {
  SparseVector out;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Rational acc = 0;
    for (const auto& [c, v] : rows_[i].entries()) {
      if (const Rational* xc = x.find(c)) acc += v * *xc;
    }
    out.set(i, acc);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fraction-free elimination on primitive integer rows.

namespace {

using IntRow = std::vector<std::pair<std::size_t, Integer>>;

void make_primitive(IntRow& r) {
  if (r.empty()) return;
  Integer g = 0;
  for (const auto& [c, v] : r) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g == 1) break;
  }
  if (sgn(r.front().second) < 0) g = -g;
  if (g != 1) {
    for (auto& [c, v] : r) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }
}

IntRow to_int_row(const SparseVector& v) {
  Integer l = 1;
  for (const auto& [c, q] : v.entries()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  IntRow r;
  r.reserve(v.nnz());
  for (const auto& [c, q] : v.entries()) {
    Integer x = q.get_num() * (l / q.get_den());
    r.emplace_back(c, std::move(x));
  }
  make_primitive(r);
  return r;
}

const Integer* lookup(const IntRow& r, std::size_t col) {
  auto it = std::lower_bound(r.begin(), r.end(), col,
                             [](const auto& e, std::size_t c) { return e.first < c; });
  return (it != r.end() && it->first == col) ? &it->second : nullptr;
}

// r <- a*r - b*p, eliminating column `col` where a = p[col], b = r[col].
void eliminate(IntRow& r, const IntRow& p, std::size_t col) {
  const Integer* pa = lookup(p, col);
  const Integer* rb = lookup(r, col);
  if (!pa || !rb) return;
  Integer g = gcd(*pa, *rb);
  Integer a = *pa / g;
  Integer b = *rb / g;
  IntRow out;
  out.reserve(r.size() + p.size());
  std::size_t i = 0, j = 0;
  Integer tmp;
  while (i < r.size() || j < p.size()) {
    if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
      tmp = a * r[i].second;
      out.emplace_back(r[i].first, tmp);
      ++i;
    } else if (i == r.size() || p[j].first < r[i].first) {
      tmp = -b * p[j].second;
      out.emplace_back(p[j].first, tmp);
      ++j;
    } else {
      tmp = a * r[i].second - b * p[j].second;
      if (sgn(tmp) != 0) out.emplace_back(r[i].first, tmp);
      ++i;
      ++j;
    }
  }
  make_primitive(out);
  r = std::move(out);
}

// Echelon (not reduced) basis of the row space, keyed by leading column.
std::vector<std::pair<std::size_t, IntRow>> echelon_rows(const RationalMatrix& m) {
  std::vector<long> pivot_of(m.cols(), -1);
  std::vector<std::pair<std::size_t, IntRow>> pivots;
  for (const auto& sv : m.row_list()) {
    IntRow r = to_int_row(sv);
    while (!r.empty()) {
      std::size_t lead = r.front().first;
      long p = pivot_of[lead];
      if (p < 0) break;
      eliminate(r, pivots[static_cast<std::size_t>(p)].second, lead);
    }
    if (!r.empty()) {
      pivot_of[r.front().first] = static_cast<long>(pivots.size());
      pivots.emplace_back(r.front().first, std::move(r));
    }
  }
  return pivots;
}

}  // namespace

std::size_t rank(const RationalMatrix& m) { return echelon_rows(m).size(); }

EchelonForm row_echelon(const RationalMatrix& m) {
  auto pivots = echelon_rows(m);
  std::sort(pivots.begin(), pivots.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  // Clear each pivot column from the rows above it, last pivot first.
  for (std::size_t k = pivots.size(); k-- > 0;) {
    std::size_t col = pivots[k].first;
    for (std::size_t i = 0; i < k; ++i) {
      if (lookup(pivots[i].second, col)) eliminate(pivots[i].second, pivots[k].second, col);
    }
  }
  EchelonForm out;
  out.cols = m.cols();
  for (auto& [col, r] : pivots) {
    const Integer* lead = lookup(r, col);
    Rational inv(1);
    inv /= Rational(*lead);
    SparseVector v;
    for (const auto& [c, x] : r) v.set(c, Rational(x) * inv);
    out.pivots.push_back(col);
    out.rows.push_back(std::move(v));
  }
  return out;
}

SparseVector EchelonForm::reduce(SparseVector v) const {
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    const Rational* x = v.find(pivots[k]);
    if (!x) continue;
    SparseVector scaled = rows[k];
    scaled *= *x;
    v -= scaled;
  }
  return v;
}

std::vector<std::size_t> EchelonForm::free_columns() const {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    if (k < pivots.size() && pivots[k] == c) {
      ++k;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<SparseVector> kernel_basis(const RationalMatrix& m) {
  EchelonForm ef = row_echelon(m);
  std::vector<SparseVector> basis;
  for (std::size_t j : ef.free_columns()) {
    SparseVector x;
    x.set(j, 1);
    for (std::size_t k = 0; k < ef.pivots.size(); ++k) {
      if (const Rational* e = ef.rows[k].find(j)) x.set(ef.pivots[k], -*e);
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Strict feasibility by exact simplex (Bland's rule).
//
// Variables x = xp - xm with 0 <= xp, xm <= 1 and a slack t in [0, 1]:
//   maximize t  subject to  -s_i a_i x + t <= 0   (s_i = +-1)
//                           +-a_i x <= 0          (s_i = 0)
// Every right-hand side is >= 0, so the slack basis is feasible from the start.

namespace {

class Simplex {
 public:
  Simplex(std::vector<std::vector<Rational>> a, std::vector<Rational> b, std::vector<Rational> c)
      : m_(a.size()), n_(c.size()), d_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    basic_.resize(m_);
    nonbasic_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) nonbasic_[j] = j;
    for (std::size_t i = 0; i < m_; ++i) basic_[i] = n_ + i;
  }

  void solve() {
    while (true) {
      std::size_t s = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(c_[j]) > 0 && (s == n_ || nonbasic_[j] < nonbasic_[s])) s = j;
      }
      if (s == n_) return;
      std::size_t r = m_;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(d_[i][s]) <= 0) continue;
        Rational ratio = b_[i] / d_[i][s];
        if (r == m_ || ratio < best || (ratio == best && basic_[i] < basic_[r])) {
          r = i;
          best = std::move(ratio);
        }
      }
      if (r == m_) throw InvariantViolation("bounded LP reported unbounded");
      pivot(r, s);
    }
  }

  const Rational& objective() const { return z_; }

  std::vector<Rational> values() const {
    std::vector<Rational> x(n_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] < n_) x[basic_[i]] = b_[i];
    }
    return x;
  }

 private:
  void pivot(std::size_t r, std::size_t s) {
    Rational inv = 1 / d_[r][s];
    for (std::size_t j = 0; j < n_; ++j) {
      if (j != s) d_[r][j] *= inv;
    }
    b_[r] *= inv;
    d_[r][s] = inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || sgn(d_[i][s]) == 0) continue;
      Rational f = d_[i][s];
      for (std::size_t j = 0; j < n_; ++j) {
        if (j != s && sgn(d_[r][j]) != 0) d_[i][j] -= f * d_[r][j];
      }
      b_[i] -= f * b_[r];
      d_[i][s] = -f * inv;
    }
    Rational f = c_[s];
    for (std::size_t j = 0; j < n_; ++j) {
      if (j != s && sgn(d_[r][j]) != 0) c_[j] -= f * d_[r][j];
    }
    z_ += f * b_[r];
    c_[s] = -f * inv;
    std::swap(basic_[r], nonbasic_[s]);
  }

  std::size_t m_, n_;
  std::vector<std::vector<Rational>> d_;
  std::vector<Rational> b_, c_;
  std::vector<std::size_t> basic_, nonbasic_;
  Rational z_ = 0;
};

bool satisfies(const RationalMatrix& a, std::span<const Sign> signs, const Witness& x) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (sign_of(a.row(i).dot(x)) != signs[i]) return false;
  }
  return true;
}

}  // namespace

std::optional<Witness> strictly_feasible(const RationalMatrix& a, std::span<const Sign> signs) {
  if (signs.size() != a.rows()) throw ArityMismatch("one sign per row required");
  const std::size_t d = a.cols();
  bool any_strict = false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (signs[i] == Sign::Zero) continue;
    any_strict = true;
    if (a.row(i).empty()) return std::nullopt;
  }
  if (!any_strict) return Witness(d, 0);

  const std::size_t nvars = 2 * d + 1;
  const std::size_t t = 2 * d;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  auto constraint = [&](const SparseVector& r, int scale, bool with_t) {
    std::vector<Rational> row(nvars, 0);
    for (const auto& [c, v] : r.entries()) {
      row[c] = v * scale;
      row[d + c] = -v * scale;
    }
    if (with_t) row[t] = 1;
    rows.push_back(std::move(row));
    rhs.emplace_back(0);
  };
  for (std::size_t i = 0; i < a.rows(); ++i) {
    switch (signs[i]) {
      case Sign::Positive: constraint(a.row(i), -1, true); break;
      case Sign::Negative: constraint(a.row(i), 1, true); break;
      case Sign::Zero:
        constraint(a.row(i), 1, false);
        constraint(a.row(i), -1, false);
        break;
    }
  }
  for (std::size_t j = 0; j < nvars; ++j) {
    std::vector<Rational> row(nvars, 0);
    row[j] = 1;
    rows.push_back(std::move(row));
    rhs.emplace_back(1);
  }
  std::vector<Rational> obj(nvars, 0);
  obj[t] = 1;

  Simplex lp(std::move(rows), std::move(rhs), std::move(obj));
  lp.solve();
  if (sgn(lp.objective()) <= 0) return std::nullopt;

  auto v = lp.values();
  Witness x(d);
  Rational biggest = 0;
  for (std::size_t j = 0; j < d; ++j) {
    x[j] = v[j] - v[d + j];
    if (abs(x[j]) > biggest) biggest = abs(x[j]);
  }
  for (auto& xj : x) xj /= biggest;
  if (!satisfies(a, signs, x)) throw InvariantViolation("LP witness fails its sign constraints");
  return x;
}

}  // namespace adjbraid
