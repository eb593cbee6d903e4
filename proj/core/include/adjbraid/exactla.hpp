#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adjbraid {

/// Exact rational number; always kept canonical (reduced, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "-p" or "p/q". Throws ParseError.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

enum class Sign : signed char { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_of(const Rational& q) {
  int s = sgn(q);
  return s > 0 ? Sign::Positive : (s < 0 ? Sign::Negative : Sign::Zero);
}

/// Sparse rational vector indexed by column position. Never stores zeros.
class SparseVector {
 public:
  SparseVector() = default;
  static SparseVector from_dense(std::span<const Rational> dense);

  const Rational* find(std::size_t col) const;
  Rational get(std::size_t col) const;
  void set(std::size_t col, const Rational& v);
  void add(std::size_t col, const Rational& v);

  bool empty() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }
  const std::map<std::size_t, Rational>& entries() const { return entries_; }

  SparseVector& operator+=(const SparseVector& o);
  SparseVector& operator-=(const SparseVector& o);
  SparseVector& operator*=(const Rational& s);
  friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
  friend bool operator==(const SparseVector& a, const SparseVector& b) { return a.entries_ == b.entries_; }

  Rational dot(std::span<const Rational> dense) const;

 private:
  std::map<std::size_t, Rational> entries_;
};

/// Rows of sparse vectors over a shared column basis of size `cols`.
class RationalMatrix {
 public:
  explicit RationalMatrix(std::size_t cols = 0) : cols_(cols) {}
  RationalMatrix(std::size_t cols, std::vector<SparseVector> rows);
  static RationalMatrix from_dense(const std::vector<std::vector<Rational>>& rows);

  std::size_t cols() const { return cols_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<SparseVector>& row_list() const { return rows_; }
  const SparseVector& row(std::size_t i) const { return rows_[i]; }
  void add_row(SparseVector r);
  RationalMatrix transpose() const;
  SparseVector apply(const SparseVector& x) const;

 private:
  std::size_t cols_;
  std::vector<SparseVector> rows_;
};

std::size_t rank(const RationalMatrix& m);

/// Basis of {x : M x = 0}; one vector per non-pivot column, with a 1 there and
/// 0 on the other non-pivot columns.
std::vector<SparseVector> kernel_basis(const RationalMatrix& m);

/// Reduced row echelon form: rows normalized so the pivot entry is 1 and all
/// pivot columns are cleared from the other rows. Rows ordered by pivot column.
struct EchelonForm {
  std::size_t cols = 0;
  std::vector<std::size_t> pivots;
  std::vector<SparseVector> rows;

  std::size_t rank() const { return pivots.size(); }
  /// Remainder of `v` after eliminating every pivot column; zero iff v is in the row span.
  SparseVector reduce(SparseVector v) const;
  std::vector<std::size_t> free_columns() const;
};

EchelonForm row_echelon(const RationalMatrix& m);

using Witness = std::vector<Rational>;

/// Searches for x with sign((A x)_i) == signs[i] for every row. Returns a witness
/// scaled so its largest absolute entry is 1 (the zero vector when every sign is
/// Zero), or nullopt when no such point exists.
std::optional<Witness> strictly_feasible(const RationalMatrix& a, std::span<const Sign> signs);

}  // namespace adjbraid
