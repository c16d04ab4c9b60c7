#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace oag {

// Piecewise-constant function N -> T with finitely many pieces. Pieces are
// stored as (start, value) with starts strictly increasing and pieces[0]
// starting at 0; the last piece extends to infinity.
template <class T>
class StepVec {
 public:
  StepVec() : pieces_{{0u, T{}}} {}
  explicit StepVec(T everywhere) : pieces_{{0u, std::move(everywhere)}} {}

  static StepVec constant(T v) { return StepVec(std::move(v)); }

  // pieces as (start, value); must begin at 0 with strictly increasing starts.
  static StepVec from_pieces(std::vector<std::pair<std::uint32_t, T>> ps) {
    StepVec r;
    r.pieces_ = std::move(ps);
    if (r.pieces_.empty() || r.pieces_.front().first != 0) r.pieces_.insert(r.pieces_.begin(), {0u, T{}});
    return r.normalized();
  }

  // value on [0, cut) is `head`, previous values from `cut` on.
  StepVec with_prefix(std::uint32_t cut, const T& head) const {
    StepVec r;
    r.pieces_.clear();
    r.pieces_.push_back({0u, head});
    if (cut == 0) { r.pieces_ = pieces_; return r.normalized(); }
    for (const auto& [s, v] : pieces_) {
      if (s < cut) continue;
      r.pieces_.push_back({s, v});
    }
    // piece of the original covering `cut`
    if (r.pieces_.size() == 1 || r.pieces_[1].first != cut)
      r.pieces_.insert(r.pieces_.begin() + 1, {cut, at(cut)});
    return r.normalized();
  }

  const T& at(std::uint32_t j) const {
    std::size_t lo = 0, hi = pieces_.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (pieces_[mid].first <= j) lo = mid; else hi = mid;
    }
    return pieces_[lo].second;
  }

  const std::vector<std::pair<std::uint32_t, T>>& pieces() const { return pieces_; }

  std::uint32_t max_breakpoint() const { return pieces_.back().first; }

  template <class F>
  static StepVec combine(const StepVec& a, const StepVec& b, F&& f) {
    StepVec r;
    r.pieces_.clear();
    std::size_t i = 0, j = 0;
    std::uint32_t cur = 0;
    while (true) {
      r.pieces_.push_back({cur, f(a.pieces_[i].second, b.pieces_[j].second)});
      std::uint32_t na = i + 1 < a.pieces_.size() ? a.pieces_[i + 1].first : UINT32_MAX;
      std::uint32_t nb = j + 1 < b.pieces_.size() ? b.pieces_[j + 1].first : UINT32_MAX;
      std::uint32_t nxt = na < nb ? na : nb;
      if (nxt == UINT32_MAX) break;
      if (na == nxt) ++i;
      if (nb == nxt) ++j;
      cur = nxt;
    }
    return r.normalized();
  }

  template <class F>
  StepVec map(F&& f) const {
    StepVec r;
    r.pieces_.clear();
    for (const auto& [s, v] : pieces_) r.pieces_.push_back({s, f(v)});
    return r.normalized();
  }

  StepVec normalized() const {
    StepVec r;
    r.pieces_.clear();
    for (const auto& pc : pieces_) {
      if (!r.pieces_.empty() && r.pieces_.back().second == pc.second) continue;
      r.pieces_.push_back(pc);
    }
    return r;
  }

  bool operator==(const StepVec& o) const { return pieces_ == o.pieces_; }

  // Explicit form used when building refinements: sorted breakpoints of this
  // vector merged into `out`.
  void collect_breakpoints(std::vector<std::uint32_t>& out) const {
    for (const auto& [s, v] : pieces_) out.push_back(s);
  }

 private:
  std::vector<std::pair<std::uint32_t, T>> pieces_;
};

}  // namespace oag
