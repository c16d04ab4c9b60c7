#include "oag/linalg.hpp"
#include "oag/subgroup.hpp"

// Brute-force membership, independent of the profile closed forms: the
// expression is turned into an explicit generator lattice over a support
// window [0, T) derived from the element plus slack, and membership is
// decided by exact integer (or localized) lattice arithmetic. Decompositions
// that need coordinates outside the window are covered by the slack; the
// agreement contract with the closed-form path is exercised by sampling.

namespace oag {

namespace {

struct WindowCtx {
  GroupHandle g;
  std::uint32_t t;       // window width
  std::uint32_t levels;  // stabilization depth for chain intersections
};

std::vector<Int> unit_vec(std::uint32_t t, std::uint32_t j, const Int& c) {
  std::vector<Int> v(t, 0);
  v[j] = c;
  return v;
}

// generators of {x in G : x_j = 0 for j < m} truncated to the window
Mat tail_lattice(const WindowCtx& ctx, std::uint32_t m) {
  const GroupHandle& g = ctx.g;
  const std::uint32_t t = ctx.t;
  Mat l(t, 0);
  if (m >= t) return l;
  switch (g->family()) {
    case Family::FreeLex: {
      std::uint32_t hi = std::min<std::uint32_t>(t, *g->finite_rank());
      for (std::uint32_t j = m; j < hi; ++j) l.append_col(unit_vec(t, j, 1));
      break;
    }
    case Family::LocalLex:
      for (std::uint32_t j = m; j < t; ++j) l.append_col(unit_vec(t, j, 1));
      break;
    case Family::PolyMod: {
      const Int mod = pow_i(g->spec().p, g->spec().n);
      for (std::uint32_t j = m; j + 1 < t; ++j) {
        auto v = unit_vec(t, j, 1);
        v[j + 1] = -1;
        l.append_col(v);
      }
      l.append_col(unit_vec(t, m, mod));
      break;
    }
    case Family::PolyPart: {
      for (const auto& cd : g->cells()) {
        std::vector<std::uint32_t> coords;
        for (unsigned k = 0;; ++k) {
          std::uint32_t j = g->cell_coord_from(cd.id, m, k);
          if (j >= t) break;
          coords.push_back(j);
        }
        if (coords.empty()) continue;
        for (std::size_t i = 0; i + 1 < coords.size(); ++i) {
          auto v = unit_vec(t, coords[i], 1);
          v[coords[i + 1]] = -1;
          l.append_col(v);
        }
        l.append_col(unit_vec(t, coords.front(), cd.modulus));
      }
      // coordinates outside every constrained cell are free
      for (std::uint32_t j = m; j < t; ++j) {
        bool in_cell = false;
        for (const auto& cd : g->cells())
          if (g->coord_in_cell(j, cd.id)) { in_cell = true; break; }
        if (!in_cell) l.append_col(unit_vec(t, j, 1));
      }
      break;
    }
  }
  return hnf_cols(l);
}

Mat scaled(const Mat& m, const Int& c) {
  Mat r = m;
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) *= c;
  return r;
}

Mat concat(const Mat& a, const Mat& b) {
  Mat r(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
  }
  return hnf_cols(r);
}

Mat expr_lattice(const WindowCtx& ctx, const SubgroupExpr& e);

Mat sharp_lattice(const WindowCtx& ctx, const ConvexSubgroup& d, const Int& p, unsigned s) {
  auto rank = ctx.g->finite_rank();
  std::uint32_t m;
  if (d.is_zero()) m = rank ? *rank : ctx.levels;
  else m = rank ? std::min(*d.level, *rank) : *d.level;
  Mat acc = tail_lattice(ctx, 0);  // the full group
  if (m == 0) return acc;          // empty intersection over strict supergroups
  Mat pk = scaled(tail_lattice(ctx, 0), pow_i(p, s));
  for (std::uint32_t j = 0; j < m; ++j) {
    Mat term = concat(tail_lattice(ctx, j), pk);
    acc = j == 0 ? term : intersect_lattices(acc, term);
  }
  return acc;
}

Mat expr_lattice(const WindowCtx& ctx, const SubgroupExpr& e) {
  struct V {
    const WindowCtx& ctx;
    Mat operator()(const SubgroupExpr::Conv& c) const {
      if (c.d.is_zero()) return Mat(ctx.t, 0);
      return tail_lattice(ctx, *c.d.level);
    }
    Mat operator()(const SubgroupExpr::Sharp& s) const {
      return sharp_lattice(ctx, s.d, s.p, s.s);
    }
    Mat operator()(const SubgroupExpr::Shift& s) const {
      return concat(expr_lattice(ctx, s.inner), scaled(tail_lattice(ctx, 0), pow_i(s.p, s.k)));
    }
    Mat operator()(const SubgroupExpr::Meet& m) const {
      return intersect_lattices(expr_lattice(ctx, m.a), expr_lattice(ctx, m.b));
    }
    Mat operator()(const SubgroupExpr::Join& j) const {
      return concat(expr_lattice(ctx, j.a), expr_lattice(ctx, j.b));
    }
    Mat operator()(const SubgroupExpr::Scale& s) const {
      return scaled(expr_lattice(ctx, s.inner), pow_i(s.p, s.r));
    }
  };
  return std::visit(V{ctx}, e.node().v);
}

std::uint32_t max_level(const SubgroupExpr& e) {
  struct V {
    std::uint32_t operator()(const SubgroupExpr::Conv& c) const {
      return c.d.level.value_or(0);
    }
    std::uint32_t operator()(const SubgroupExpr::Sharp& s) const {
      return s.d.level.value_or(0);
    }
    std::uint32_t operator()(const SubgroupExpr::Shift& s) const { return max_level(s.inner); }
    std::uint32_t operator()(const SubgroupExpr::Meet& m) const {
      return std::max(max_level(m.a), max_level(m.b));
    }
    std::uint32_t operator()(const SubgroupExpr::Join& j) const {
      return std::max(max_level(j.a), max_level(j.b));
    }
    std::uint32_t operator()(const SubgroupExpr::Scale& s) const { return max_level(s.inner); }
  };
  return std::visit(V{}, e.node().v);
}

}  // namespace

bool member_oracle(const GroupHandle& g, const SubgroupExpr& e, const Element& x,
                   unsigned support_slack, unsigned coeff_slack) {
  (void)coeff_slack;  // lattice arithmetic carries arbitrary coefficients
  std::uint32_t base = x.is_zero() ? 0 : x.max_support() + 1;
  std::uint32_t t = std::max(base, max_level(e)) + 1 + support_slack;
  if (auto r = g->finite_rank()) t = std::max<std::uint32_t>(*r, 1);
  if (t > 96) throw OracleBoundExceeded("window " + std::to_string(t) + " too wide");

  std::vector<Int> xv(t, 0);
  if (g->rational_coeffs()) {
    Int den_lcm = 1;
    for (const auto& [j, c] : x.coords()) den_lcm = lcm_i(den_lcm, den(c));
    // clearing the (p-coprime, hence unit) denominators preserves membership
    for (const auto& [j, c] : x.coords()) xv[j] = num(c) * (den_lcm / den(c));
  } else {
    for (const auto& [j, c] : x.coords()) xv[j] = to_int(c);
  }

  WindowCtx ctx{g, t, t};
  Mat lat = expr_lattice(ctx, e);
  if (g->rational_coeffs()) return in_col_span_local(lat, xv, g->local_prime());
  return in_col_span(lat, xv);
}

}  // namespace oag
