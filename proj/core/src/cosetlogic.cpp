#include "oag/cosetlogic.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "oag/errors.hpp"

namespace oag::cosetlogic {

using json = nlohmann::ordered_json;

std::int64_t FiniteAmbient::order() const {
  std::int64_t o = 1;
  for (auto m : moduli) o *= m;
  return o;
}

Tuple FiniteAmbient::reduce(Tuple t) const {
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    t[i] %= moduli[i];
    if (t[i] < 0) t[i] += moduli[i];
  }
  return t;
}

Tuple FiniteAmbient::add(const Tuple& a, const Tuple& b) const {
  Tuple r(a);
  for (std::size_t i = 0; i < moduli.size(); ++i) r[i] = (r[i] + b[i]) % moduli[i];
  return r;
}

Tuple FiniteAmbient::sub(const Tuple& a, const Tuple& b) const {
  Tuple r(a);
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    r[i] = (r[i] - b[i]) % moduli[i];
    if (r[i] < 0) r[i] += moduli[i];
  }
  return r;
}

std::int64_t FiniteAmbient::encode(const Tuple& t) const {
  std::int64_t code = 0;
  for (std::size_t i = 0; i < moduli.size(); ++i) code = code * moduli[i] + t[i];
  return code;
}

Tuple FiniteAmbient::decode(std::int64_t code) const {
  Tuple t(moduli.size());
  for (std::size_t i = moduli.size(); i-- > 0;) {
    t[i] = code % moduli[i];
    code /= moduli[i];
  }
  return t;
}

FiniteAmbient make_ambient(std::vector<std::int64_t> moduli) {
  if (moduli.empty()) throw InvalidSpec("ambient needs at least one cyclic factor");
  Int p = 0;
  for (auto m : moduli) {
    if (m < 2) throw InvalidSpec("cyclic factor must be >= 2");
    Int q = 2;
    while (Int(m) % q != 0) ++q;
    Int mm = m;
    while (mm % q == 0) mm /= q;
    if (mm != 1) throw InvalidSpec("cyclic factor is not a prime power");
    if (p == 0) p = q;
    else if (p != q) throw InvalidSpec("all cyclic factors must share one prime");
  }
  FiniteAmbient amb;
  amb.moduli = std::move(moduli);
  amb.p = p;
  if (amb.order() > 100000000) throw AmbientTooLarge("ambient order too large");
  return amb;
}

std::vector<std::int64_t> enumerate_subgroup(const FiniteAmbient& amb, const Subgrp& s) {
  std::unordered_set<std::int64_t> seen;
  std::deque<Tuple> queue;
  Tuple z = amb.zero();
  seen.insert(amb.encode(z));
  queue.push_back(z);
  while (!queue.empty()) {
    Tuple cur = queue.front();
    queue.pop_front();
    for (const auto& g : s.gens) {
      Tuple nxt = amb.add(cur, amb.reduce(g));
      if (seen.insert(amb.encode(nxt)).second) queue.push_back(nxt);
    }
  }
  std::vector<std::int64_t> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::unordered_set<std::int64_t> subgroup_set(const FiniteAmbient& amb, const Subgrp& s) {
  auto v = enumerate_subgroup(amb, s);
  return {v.begin(), v.end()};
}

std::unordered_set<std::int64_t> sum_set(const FiniteAmbient& amb, const Subgrp& a,
                                         const Subgrp& b) {
  Subgrp both;
  both.gens = a.gens;
  both.gens.insert(both.gens.end(), b.gens.begin(), b.gens.end());
  return subgroup_set(amb, both);
}

std::unordered_set<std::int64_t> intersect_sets(const std::unordered_set<std::int64_t>& a,
                                                const std::unordered_set<std::int64_t>& b) {
  std::unordered_set<std::int64_t> r;
  for (auto x : a)
    if (b.contains(x)) r.insert(x);
  return r;
}

bool in_coset(const FiniteAmbient& amb, const Tuple& y, const Tuple& rep,
              const std::unordered_set<std::int64_t>& sub) {
  return sub.contains(amb.encode(amb.sub(y, rep)));
}

}  // namespace

std::vector<Violation> validate_system(const CosetSystem& sys, const FiniteAmbient& amb) {
  std::vector<Violation> out;
  if (amb.order() > 1000000) throw AmbientTooLarge("validation sweep beyond 10^6");
  auto m0 = subgroup_set(amb, sys.base_sub);
  std::vector<std::unordered_set<std::int64_t>> subs;
  for (const auto& [rep, sub] : sys.exclusions) subs.push_back(subgroup_set(amb, sub));
  for (std::size_t i = 0; i < sys.exclusions.size(); ++i) {
    // containment: every element of a_i + M_i lies in a_0 + M_0
    for (auto code : subs[i]) {
      Tuple el = amb.add(sys.exclusions[i].first, amb.decode(code));
      if (!in_coset(amb, el, sys.base_rep, m0)) {
        out.push_back({"exclusion " + std::to_string(i) + " escapes the base coset", i, i});
        break;
      }
    }
  }
  for (std::size_t i = 0; i < sys.exclusions.size(); ++i)
    for (std::size_t j = i + 1; j < sys.exclusions.size(); ++j) {
      bool disjoint = true;
      for (auto code : subs[i]) {
        Tuple el = amb.add(sys.exclusions[i].first, amb.decode(code));
        if (in_coset(amb, el, sys.exclusions[j].first, subs[j])) { disjoint = false; break; }
      }
      if (!disjoint)
        out.push_back({"exclusions " + std::to_string(i) + " and " + std::to_string(j) +
                       " overlap", i, j});
    }
  return out;
}

bool saturation_membership(const CosetSystem& sys, const Subgrp& gprime,
                           const FiniteAmbient& amb, const Tuple& y) {
  auto gp = subgroup_set(amb, gprime);
  auto m0_gp = sum_set(amb, sys.base_sub, gprime);
  if (!m0_gp.contains(amb.encode(amb.sub(y, sys.base_rep)))) return false;

  auto m0_cap = intersect_sets(subgroup_set(amb, sys.base_sub), gp);
  Rat excluded = 0;
  for (const auto& [rep, sub] : sys.exclusions) {
    auto mi_gp = sum_set(amb, sub, gprime);
    if (!mi_gp.contains(amb.encode(amb.sub(y, rep)))) continue;
    auto mi_cap = intersect_sets(subgroup_set(amb, sub), gp);
    Int idx(m0_cap.size() / mi_cap.size());
    // every such ratio is a power of the ambient prime: quotients between
    // G and p^rG stay p-groups
    Int check = idx;
    while (check % amb.p == 0) check /= amb.p;
    if (check != 1)
      throw Error("index ratio " + idx.str() + " is not a power of " + amb.p.str());
    excluded += Rat(1, idx);
  }
  return excluded < 1;
}

bool brute_membership(const CosetSystem& sys, const Subgrp& gprime, const FiniteAmbient& amb,
                      const Tuple& y) {
  if (amb.order() > 1000000) throw AmbientTooLarge("brute sweep beyond 10^6");
  auto m0 = subgroup_set(amb, sys.base_sub);
  std::vector<std::unordered_set<std::int64_t>> subs;
  for (const auto& [rep, sub] : sys.exclusions) subs.push_back(subgroup_set(amb, sub));
  auto gp = subgroup_set(amb, gprime);
  for (auto code : m0) {
    Tuple el = amb.add(sys.base_rep, amb.decode(code));
    bool excluded = false;
    for (std::size_t i = 0; i < sys.exclusions.size(); ++i)
      if (in_coset(amb, el, sys.exclusions[i].first, subs[i])) { excluded = true; break; }
    if (excluded) continue;
    if (gp.contains(amb.encode(amb.sub(y, el)))) return true;
  }
  return false;
}

// Minimal N with: sum of 1/q_i over all k powers-of-n reaches 1 iff the part
// with q_i < n^N already does. Violations survive capping every exponent at
// N: replacing q_i = n^e (e > N) by n^N leaves the restricted sum unchanged
// and only grows the full sum, so exhausting exponent tuples in [0, N]^k is a
// complete search for each candidate N.
unsigned threshold_n(unsigned n, unsigned k) {
  for (unsigned cand = 0;; ++cand) {
    std::vector<unsigned> e(k, 0);  // odometer over [0, cand]^k
    bool violated = false;
    while (!violated) {
      Rat full = 0, restricted = 0;
      for (unsigned i = 0; i < k; ++i) {
        Rat term(1, pow_i(Int(n), e[i]));
        full += term;
        if (e[i] < cand) restricted += term;
      }
      if (full >= 1 && restricted < 1) { violated = true; break; }
      std::size_t pos = 0;
      while (pos < k && e[pos] == cand) e[pos++] = 0;
      if (pos == k) break;
      ++e[pos];
    }
    if (!violated) return cand;
  }
}

std::variant<CosetSystem, EmptyIntersection> normalize_combination(
    const std::vector<std::pair<Tuple, Subgrp>>& positives,
    const std::vector<std::pair<Tuple, Subgrp>>& negatives, const FiniteAmbient& amb) {
  if (positives.empty()) throw InvalidSpec("need at least one positive coset");
  // intersect the positives: with comparable-or-disjoint subgroups the result
  // is the smallest coset or empty
  Tuple rep = amb.reduce(positives[0].first);
  Subgrp sub = positives[0].second;
  auto sub_set = subgroup_set(amb, sub);
  for (std::size_t i = 1; i < positives.size(); ++i) {
    auto other = subgroup_set(amb, positives[i].second);
    const bool sub_smaller = sub_set.size() <= other.size();
    const auto& small = sub_smaller ? sub_set : other;
    const auto& big = sub_smaller ? other : sub_set;
    for (auto code : small)
      if (!big.contains(code)) throw InvalidSpec("positive subgroups are not comparable");
    const Tuple& small_rep = sub_smaller ? rep : positives[i].first;
    const Tuple& big_rep = sub_smaller ? positives[i].first : rep;
    if (!big.contains(amb.encode(amb.sub(small_rep, big_rep)))) return EmptyIntersection{};
    if (!sub_smaller) { rep = amb.reduce(positives[i].first); sub = positives[i].second; sub_set = other; }
  }
  // absorb negatives: keep maximal ones meeting the base, as sub-cosets
  std::vector<std::pair<Tuple, Subgrp>> kept;
  std::vector<std::unordered_set<std::int64_t>> kept_sets;
  for (const auto& [nrep, nsub] : negatives) {
    auto nset = subgroup_set(amb, nsub);
    // restrict to the base coset: either disjoint (drop), containing the base
    // (empty result), or contained
    bool meets = false;
    for (auto code : sub_set) {
      Tuple el = amb.add(rep, amb.decode(code));
      if (in_coset(amb, el, nrep, nset)) { meets = true; break; }
    }
    if (!meets) continue;
    if (nset.size() >= sub_set.size()) {
      bool covers = true;
      for (auto code : sub_set) {
        Tuple el = amb.add(rep, amb.decode(code));
        if (!in_coset(amb, el, nrep, nset)) { covers = false; break; }
      }
      if (covers) return EmptyIntersection{};
      throw InvalidSpec("negative coset is not comparable with the base");
    }
    // containment in the base coset
    for (auto code : nset) {
      Tuple el = amb.add(nrep, amb.decode(code));
      if (!in_coset(amb, el, rep, sub_set))
        throw InvalidSpec("negative coset meets the base without containment");
    }
    // absorb against previously kept exclusions
    bool absorbed = false;
    for (std::size_t i = 0; i < kept.size() && !absorbed; ++i) {
      bool in_prev = in_coset(amb, nrep, kept[i].first, kept_sets[i]) &&
                     nset.size() <= kept_sets[i].size();
      if (in_prev) absorbed = true;
      bool swallows = in_coset(amb, kept[i].first, nrep, nset) &&
                      kept_sets[i].size() <= nset.size();
      if (swallows) {
        kept[i] = {amb.reduce(nrep), nsub};
        kept_sets[i] = nset;
        absorbed = true;
      }
    }
    if (!absorbed) {
      kept.push_back({amb.reduce(nrep), nsub});
      kept_sets.push_back(std::move(nset));
    }
  }
  CosetSystem out{rep, sub, kept};
  auto violations = validate_system(out, amb);
  if (!violations.empty()) throw InvalidSpec("normalized system fails validation: " +
                                             violations.front().what);
  return out;
}

std::string to_json(const CosetSystem& sys, const Subgrp& gprime, const FiniteAmbient& amb) {
  json j;
  j["ambient"] = amb.moduli;
  j["base"] = {{"rep", sys.base_rep}, {"gens", sys.base_sub.gens}};
  j["exclusions"] = json::array();
  for (const auto& [rep, sub] : sys.exclusions)
    j["exclusions"].push_back({{"rep", rep}, {"gens", sub.gens}});
  j["gprime"] = gprime.gens;
  return j.dump(2);
}

ParsedSystem from_json(const std::string& text) {
  json j = json::parse(text);
  ParsedSystem out;
  out.amb = make_ambient(j.at("ambient").get<std::vector<std::int64_t>>());
  out.sys.base_rep = out.amb.reduce(j.at("base").at("rep").get<Tuple>());
  out.sys.base_sub.gens = j.at("base").at("gens").get<std::vector<Tuple>>();
  for (const auto& e : j.at("exclusions"))
    out.sys.exclusions.push_back(
        {out.amb.reduce(e.at("rep").get<Tuple>()), Subgrp{e.at("gens").get<std::vector<Tuple>>()}});
  out.gprime.gens = j.at("gprime").get<std::vector<Tuple>>();
  return out;
}

}  // namespace oag::cosetlogic
