#include "oag/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace oag {

Mat Mat::mul(const Mat& o) const {
  Mat r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& aik = (*this)(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

Mat Mat::transpose() const {
  Mat r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

void Mat::append_col(const std::vector<Int>& col) {
  Mat r(rows_ == 0 ? col.size() : rows_, cols_ + 1);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
    r(i, cols_) = col[i];
  }
  *this = r;
}

std::vector<Int> Mat::col(std::size_t j) const {
  std::vector<Int> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

namespace {

void swap_rows(Mat& m, std::size_t a, std::size_t b) {
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(Mat& m, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row[a] += c * row[b]
void add_row(Mat& m, std::size_t a, std::size_t b, const Int& c) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) += c * m(b, j);
}
void add_col(Mat& m, std::size_t a, std::size_t b, const Int& c) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) += c * m(i, b);
}
void neg_row(Mat& m, std::size_t a) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(a, j) = -m(a, j);
}
void neg_col(Mat& m, std::size_t a) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, a) = -m(i, a);
}

}  // namespace

Smith smith_form(Mat m) {
  Smith s;
  const std::size_t R = m.rows(), C = m.cols();
  s.u = Mat::identity(R);
  s.v = Mat::identity(C);
  std::size_t t = 0;
  while (t < R && t < C) {
    // pivot: nonzero entry of minimal absolute value in the remaining block
    std::size_t pi = t, pj = t;
    bool found = false;
    Int best = 0;
    for (std::size_t i = t; i < R; ++i)
      for (std::size_t j = t; j < C; ++j) {
        if (m(i, j) == 0) continue;
        Int a = abs(m(i, j));
        if (!found || a < best) { best = a; pi = i; pj = j; found = true; }
      }
    if (!found) break;
    if (pi != t) { swap_rows(m, t, pi); swap_rows(s.u, t, pi); }
    if (pj != t) { swap_cols(m, t, pj); swap_cols(s.v, t, pj); }
    bool clean = true;
    for (std::size_t i = t + 1; i < R; ++i) {
      if (m(i, t) == 0) continue;
      Int q = m(i, t) / m(t, t);
      add_row(m, i, t, -q);
      add_row(s.u, i, t, -q);
      if (m(i, t) != 0) clean = false;
    }
    for (std::size_t j = t + 1; j < C; ++j) {
      if (m(t, j) == 0) continue;
      Int q = m(t, j) / m(t, t);
      add_col(m, j, t, -q);
      add_col(s.v, j, t, -q);
      if (m(t, j) != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders appeared; re-pick pivot
    // divisibility chain: fold any non-multiple into the pivot position
    bool redo = false;
    for (std::size_t i = t + 1; i < R && !redo; ++i)
      for (std::size_t j = t + 1; j < C && !redo; ++j)
        if (m(i, j) % m(t, t) != 0) {
          add_row(m, t, i, 1);
          add_row(s.u, t, i, 1);
          redo = true;
        }
    if (redo) continue;
    if (m(t, t) < 0) { neg_row(m, t); neg_row(s.u, t); }
    ++t;
  }
  s.rank = t;
  s.d = m;
  return s;
}

Mat hnf_cols(const Mat& m) {
  Mat w = m;
  const std::size_t R = w.rows();
  std::size_t col = 0;
  for (std::size_t row = 0; row < R && col < w.cols(); ++row) {
    // reduce columns col.. against each other on this row via gcd steps
    while (true) {
      std::size_t nz = col, cnt = 0;
      Int best = 0;
      for (std::size_t j = col; j < w.cols(); ++j) {
        if (w(row, j) == 0) continue;
        ++cnt;
        Int a = abs(w(row, j));
        if (best == 0 || a < best) { best = a; nz = j; }
      }
      if (cnt == 0) break;
      if (nz != col) swap_cols(w, col, nz);
      if (cnt == 1) break;
      for (std::size_t j = col + 1; j < w.cols(); ++j) {
        if (w(row, j) == 0) continue;
        Int q = w(row, j) / w(row, col);
        add_col(w, j, col, -q);
      }
    }
    if (w(row, col) == 0) continue;
    if (w(row, col) < 0) neg_col(w, col);
    // reduce earlier pivot columns' entries on this row into [0, pivot)
    for (std::size_t j = 0; j < col; ++j) {
      Int q = w(row, j) / w(row, col);
      if (w(row, j) - q * w(row, col) < 0) q -= 1;
      if (q != 0) add_col(w, j, col, -q);
    }
    ++col;
  }
  // drop zero columns beyond `col`
  Mat r(R, col);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j < col; ++j) r(i, j) = w(i, j);
  return r;
}

std::optional<std::vector<Int>> solve_cols(const Mat& m, const std::vector<Int>& x) {
  if (m.cols() == 0) {
    for (const auto& e : x)
      if (e != 0) return std::nullopt;
    return std::vector<Int>{};
  }
  Smith s = smith_form(m);
  // m c = x  <=>  D (V^-1 c) = U x
  std::vector<Int> ux(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.rows(); ++j) ux[i] += s.u(i, j) * x[j];
  std::vector<Int> w(m.cols(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int d = i < s.rank ? s.d(i, i) : Int(0);
    if (d == 0) {
      if (ux[i] != 0) return std::nullopt;
    } else {
      if (ux[i] % d != 0) return std::nullopt;
      if (i < m.cols()) w[i] = ux[i] / d;
    }
  }
  std::vector<Int> c(m.cols(), 0);
  for (std::size_t i = 0; i < m.cols(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c[i] += s.v(i, j) * w[j];
  return c;
}

bool in_col_span(const Mat& m, const std::vector<Int>& x) { return solve_cols(m, x).has_value(); }

bool in_col_span_local(const Mat& m, const std::vector<Int>& x, const Int& p) {
  if (m.cols() == 0) {
    for (const auto& e : x)
      if (e != 0) return false;
    return true;
  }
  Smith s = smith_form(m);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int ux = 0;
    for (std::size_t j = 0; j < m.rows(); ++j) ux += s.u(i, j) * x[j];
    Int d = i < s.rank ? s.d(i, i) : Int(0);
    if (d == 0) {
      if (ux != 0) return false;
    } else {
      // need ux/d in Z_(p): only the p-part of d matters
      if (ux % p_part(d, p) != 0) return false;
    }
  }
  return true;
}

Mat kernel_cols(const Mat& m) {
  Smith s = smith_form(m);
  // kernel = V * {e_i : d_i = 0 or i >= rank}
  Mat k(m.cols(), 0);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    bool zero_diag = i >= s.rank;
    if (!zero_diag) continue;
    k.append_col(s.v.col(i));
  }
  return k;
}

Mat intersect_lattices(const Mat& a, const Mat& b) {
  if (a.cols() == 0 || b.cols() == 0) return Mat(a.rows(), 0);
  Mat stacked(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) stacked(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) stacked(i, a.cols() + j) = -b(i, j);
  }
  Mat ker = kernel_cols(stacked);
  // intersection generated by a * (first block of each kernel vector)
  Mat gens(a.rows(), ker.cols());
  for (std::size_t c = 0; c < ker.cols(); ++c)
    for (std::size_t i = 0; i < a.rows(); ++i) {
      Int acc = 0;
      for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * ker(j, c);
      gens(i, c) = acc;
    }
  return hnf_cols(gens);
}

std::optional<std::vector<Int>> solve_congruences(const Mat& a,
                                                  const std::vector<Int>& moduli,
                                                  const std::vector<Int>& b) {
  // [A | diag(moduli)] (y, w)^T = b over Z
  Mat aug(a.rows(), a.cols() + a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols() + i) = moduli[i];
  }
  auto sol = solve_cols(aug, b);
  if (!sol) return std::nullopt;
  sol->resize(a.cols());
  return sol;
}

Mat congruence_kernel(const Mat& a, const std::vector<Int>& moduli) {
  Mat aug(a.rows(), a.cols() + a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols() + i) = moduli[i];
  }
  Mat ker = kernel_cols(aug);
  Mat proj(a.cols(), ker.cols());
  for (std::size_t j = 0; j < ker.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) proj(i, j) = ker(i, j);
  return hnf_cols(proj);
}

}  // namespace oag
