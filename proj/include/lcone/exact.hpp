#pragma once

// Exact integer/rational linear algebra. Everything here is backed by GMP and
// never touches floating point.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lcone/error.hpp"

namespace lcone {

using Int = mpz_class;
using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;
/// Integer lattice point. Coordinates at the scales handled here (d <= 5)
/// stay far below 2^62; enumeration code checks this.
using Point = std::vector<std::int64_t>;

/// Dense row-major rational matrix.
class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Mat identity(std::size_t n);
  static Mat from_rows(const std::vector<RatVec>& rows);
  static Mat from_points(std::span<const Point> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RatVec row(std::size_t i) const;
  Mat transpose() const;
  RatVec apply(std::span<const Rat> x) const;

  friend Mat operator*(const Mat& a, const Mat& b);
  friend bool operator==(const Mat& a, const Mat& b) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

/// Symmetric d x d matrix stored as its lower triangle, row-major:
/// (0,0), (1,0), (1,1), (2,0), (2,1), (2,2), ...
class SymMat {
public:
  SymMat() = default;
  explicit SymMat(int dim) : dim_(dim), lower_(coord_count(dim)) {}
  SymMat(int dim, RatVec lower);

  static SymMat identity(int dim);
  static SymMat from_rows(const std::vector<std::vector<long>>& rows);
  static SymMat from_mat(const Mat& m);
  /// v v^T
  static SymMat outer(std::span<const std::int64_t> v);
  static SymMat from_ints(int dim, std::span<const Int> lower);

  static constexpr std::size_t coord_count(int dim) { return std::size_t(dim) * (dim + 1) / 2; }
  static constexpr std::size_t index(int i, int j) {
    return i >= j ? std::size_t(i) * (i + 1) / 2 + j : std::size_t(j) * (j + 1) / 2 + i;
  }

  int dim() const { return dim_; }
  const RatVec& lower() const { return lower_; }
  RatVec& lower() { return lower_; }

  const Rat& operator()(int i, int j) const { return lower_[index(i, j)]; }
  Rat& operator()(int i, int j) { return lower_[index(i, j)]; }

  Mat to_mat() const;
  bool is_integral() const;
  bool is_zero() const;
  /// Integer lower-triangular coordinates; requires is_integral().
  IntVec to_ints() const;

  /// Q[x] = x^T Q x
  Rat eval(std::span<const std::int64_t> x) const;
  Rat eval(std::span<const Rat> x) const;
  /// x^T Q y
  Rat bilinear(std::span<const std::int64_t> x, std::span<const std::int64_t> y) const;
  Rat bilinear(std::span<const Rat> x, std::span<const std::int64_t> y) const;

  /// U^T Q U
  SymMat congruent(const Mat& u) const;

  SymMat& operator+=(const SymMat& o);
  SymMat& operator-=(const SymMat& o);
  SymMat& operator*=(const Rat& s);
  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(SymMat a, const Rat& s) { return a *= s; }
  friend bool operator==(const SymMat& a, const SymMat& b) = default;
  friend bool operator<(const SymMat& a, const SymMat& b);

private:
  int dim_ = 0;
  RatVec lower_;
};

/// Trace inner product <A, B> = tr(AB).
Rat trace_inner(const SymMat& a, const SymMat& b);

/// Coefficient vector f with f . coords(B) = <A, B> for every symmetric B.
RatVec trace_functional(const SymMat& a);

struct LDLT {
  Mat lower;    // unit lower triangular
  RatVec diag;  // D
  bool positive_definite() const;
};

/// Q = L D L^T without pivoting. Throws ZeroPivotNotPD on a zero pivot.
LDLT ldlt(const SymMat& q);
bool is_positive_definite(const SymMat& q);
bool is_positive_semidefinite(const SymMat& q);

RatVec solve(const Mat& a, std::span<const Rat> b);
Rat determinant(const Mat& a);
Rat determinant(const SymMat& q);
std::size_t rank(const Mat& a);
std::size_t rank(const SymMat& q);
/// Fraction-free rank of an integer row set.
std::size_t rank(const std::vector<IntVec>& rows);
/// Basis of {x : A x = 0}, one vector per free column, integral and primitive.
std::vector<IntVec> kernel(const Mat& a);
/// Indices of a maximal linearly independent subset of the rows, greedy in order.
std::vector<std::size_t> independent_rows(const std::vector<IntVec>& rows);

/// Row-style Hermite reduction of an integer generating set; returns a basis
/// (upper triangular, positive pivots) of the lattice the vectors span.
std::vector<IntVec> hermite_basis(std::span<const Point> vectors, int d);
/// True iff the integer span of the vectors is all of Z^d.
bool lattice_span_full(std::span<const Point> vectors, int d);

enum class SignConvention {
  FirstNonzeroPositive,  // projective normalization
  PreserveSign,          // ray normalization: only positive scaling
};

IntVec gcd_normalize(IntVec v, SignConvention sign = SignConvention::FirstNonzeroPositive);
Point gcd_normalize(Point v, SignConvention sign = SignConvention::FirstNonzeroPositive);
SymMat gcd_normalize(const SymMat& m, SignConvention sign = SignConvention::FirstNonzeroPositive);
/// Positive multiple of v with coprime integer entries.
IntVec primitive_integer(std::span<const Rat> v, SignConvention sign = SignConvention::PreserveSign);

// Text format: `d` followed by the d(d+1)/2 lower-triangular entries as
// `num/den` (or integer) tokens.
SymMat read_form(std::istream& in);
SymMat parse_form(const std::string& text);
std::string format_form(const SymMat& q);

std::string to_string(const Point& p);
std::string to_string(const RatVec& v);

/// Checked narrowing used where a lattice coordinate must fit in int64.
std::int64_t to_i64(const Int& x);
std::int64_t to_i64(const Rat& x);

}  // namespace lcone
