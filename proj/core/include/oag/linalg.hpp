#pragma once

#include <optional>
#include <vector>

#include "oag/numeric.hpp"

namespace oag {

// Dense exact integer matrix, row-major. All sizes here are tiny (tens), so
// there is no need for anything smarter than textbook algorithms.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Mat mul(const Mat& o) const;
  Mat transpose() const;

  void append_col(const std::vector<Int>& col);
  std::vector<Int> col(std::size_t j) const;

  bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> a_;
};

// Smith normal form: U * M * V = D with U, V unimodular and D diagonal with
// d1 | d2 | ... | dr, remaining diagonal entries zero.
struct Smith {
  Mat u, d, v;
  std::size_t rank = 0;
};

Smith smith_form(Mat m);

// Lattice spanned by the columns of `gens` inside Z^n.
struct Lattice {
  Mat gens;  // n x k

  std::size_t dim() const { return gens.rows(); }
};

// Column-style Hermite reduction: returns a matrix with at most n columns
// spanning the same lattice, in a canonical (lower-triangular staircase,
// positive pivots, reduced off-pivots) form. Canonical: equal lattices give
// equal matrices.
Mat hnf_cols(const Mat& m);

// Does the integer vector x lie in the column span of m (over Z)?
bool in_col_span(const Mat& m, const std::vector<Int>& x);

// Particular solution of m * c = x over Z, if any.
std::optional<std::vector<Int>> solve_cols(const Mat& m, const std::vector<Int>& x);

// Is x in the Z_(p)-span of the columns (denominators coprime to p allowed)?
bool in_col_span_local(const Mat& m, const std::vector<Int>& x, const Int& p);

// Generators of the integer kernel {c : m c = 0}.
Mat kernel_cols(const Mat& m);

// Intersection of two column lattices in the same ambient Z^n.
Mat intersect_lattices(const Mat& a, const Mat& b);

// Solve A y = b (mod moduli), componentwise moduli on the rows: returns a
// particular integer solution y if one exists.
std::optional<std::vector<Int>> solve_congruences(const Mat& a,
                                                  const std::vector<Int>& moduli,
                                                  const std::vector<Int>& b);

// The set {y : A y = 0 (mod moduli)} as a full-rank sublattice of Z^cols
// (it always contains prod(moduli) * Z^cols), in canonical HNF form.
Mat congruence_kernel(const Mat& a, const std::vector<Int>& moduli);

}  // namespace oag
