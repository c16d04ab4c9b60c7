// Command line workbench for exact computation in lexicographically ordered
// abelian groups: membership in divisibility-shifted subgroups, spine points,
// quotient indices and dimensions, coset-combination checks and the
// verification suites.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>

#include "oag/cosetlogic.hpp"
#include "oag/deffn.hpp"
#include "oag/parse.hpp"
#include "oag/quotient.hpp"
#include "oag/suites.hpp"

using namespace oag;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OAG_SEED")) return std::strtoull(env, nullptr, 0);
  return 0x0a67;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream os(out_path);
  os << text;
}

struct VerifyOptions {
  std::string lemma;
  std::string group;
  std::uint64_t seed = default_seed();
  unsigned samples = 200;
  unsigned cap = 32;
  unsigned smax = 3;
  unsigned rmax = 3;
  unsigned jobs = 1;
  bool timing = false;
  std::string out;
};

int run_verify(const VerifyOptions& opt) {
  std::vector<std::string> ids;
  if (opt.lemma == "all") ids = registry_ids();
  else ids.push_back(opt.lemma);

  std::vector<LemmaCase> cases;
  for (const auto& id : ids) {
    LemmaCase c;
    c.id = id;
    c.spec = opt.group.empty() ? default_spec_for(id) : parse_group_spec(opt.group);
    c.samples = opt.samples;
    c.seed = opt.seed;
    c.cap = opt.cap;
    c.smax = opt.smax;
    c.rmax = opt.rmax;
    cases.push_back(std::move(c));
  }

  std::vector<VerificationReport> reports(cases.size());
  unsigned jobs = std::max(1u, opt.jobs);
  std::size_t next = 0;
  while (next < cases.size()) {
    std::vector<std::future<VerificationReport>> batch;
    for (unsigned j = 0; j < jobs && next < cases.size(); ++j, ++next)
      batch.push_back(std::async(std::launch::async,
                                 [&cases, next]() { return run_lemma_suite(cases[next]); }));
    for (std::size_t j = 0; j < batch.size(); ++j)
      reports[next - batch.size() + j] = batch[j].get();
  }
  // deterministic assembly: reports sorted by registry key
  std::sort(reports.begin(), reports.end(),
            [](const VerificationReport& a, const VerificationReport& b) {
              return a.lemma < b.lemma;
            });

  std::ostringstream os;
  bool all_pass = true, any_inconclusive = false;
  if (reports.size() == 1) {
    os << reports[0].to_json(opt.timing) << "\n";
  } else {
    os << "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i)
      os << reports[i].to_json(opt.timing) << (i + 1 < reports.size() ? ",\n" : "\n");
    os << "]\n";
  }
  bool hard_violation = false;
  for (const auto& r : reports) {
    all_pass = all_pass && r.passed();
    any_inconclusive = any_inconclusive || r.inconclusive();
    for (const auto& cr : r.cases)
      if (!cr.pass && !cr.inconclusive) hard_violation = true;
  }
  emit(os.str(), opt.out);
  if (hard_violation) return kExitViolation;
  if (!all_pass || any_inconclusive) return kExitInconclusive;
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oag: an exact workbench for ordered abelian groups"};
  app.require_subcommand(1);

  // group
  std::string g_spec;
  auto* cmd_group = app.add_subcommand("group", "construct a group and print its metadata");
  cmd_group->add_option("--spec", g_spec, "group spec, e.g. polymod(p=2,n=2)")->required();

  // member
  std::string m_group, m_sub, m_elem, m_out;
  bool m_oracle = false;
  auto* cmd_member = app.add_subcommand("member", "decide membership in a subgroup expression");
  cmd_member->add_option("--group", m_group)->required();
  cmd_member->add_option("--subgroup", m_sub)->required();
  cmd_member->add_option("--element", m_elem)->required();
  cmd_member->add_flag("--oracle", m_oracle, "also run the brute-force oracle");

  // spine
  std::string s_group, s_elem;
  std::uint64_t s_n = 2;
  auto* cmd_spine = app.add_subcommand("spine", "divisibility spine points of an element");
  cmd_spine->add_option("--group", s_group)->required();
  cmd_spine->add_option("--n", s_n, "divisibility modulus")->required();
  cmd_spine->add_option("--element", s_elem)->required();

  // index
  std::string i_group, i_a, i_b, i_out;
  unsigned i_cap = 32;
  auto* cmd_index = app.add_subcommand("index", "exact index or certified lower bound");
  cmd_index->add_option("--group", i_group)->required();
  cmd_index->add_option("--a", i_a, "numerator subgroup")->required();
  cmd_index->add_option("--b", i_b, "denominator subgroup")->required();
  cmd_index->add_option("--cap", i_cap);
  cmd_index->add_option("--out", i_out);

  // dim-profile
  std::string d_group, d_out;
  std::uint64_t d_p = 2;
  unsigned d_smax = 3, d_cap = 32;
  auto* cmd_dim = app.add_subcommand("dim-profile", "F_p-dimension profile rows as CSV");
  cmd_dim->add_option("--group", d_group)->required();
  cmd_dim->add_option("--p", d_p)->required();
  cmd_dim->add_option("--smax", d_smax);
  cmd_dim->add_option("--cap", d_cap);
  cmd_dim->add_option("--out", d_out);

  // verify
  VerifyOptions v;
  auto* cmd_verify = app.add_subcommand("verify", "run a lemma verification suite");
  cmd_verify->add_option("--lemma", v.lemma, "registry id or 'all'")->required();
  cmd_verify->add_option("--group", v.group, "group spec (default depends on the lemma)");
  cmd_verify->add_option("--seed", v.seed, "seed (or OAG_SEED env)");
  cmd_verify->add_option("--samples", v.samples);
  cmd_verify->add_option("--cap", v.cap);
  cmd_verify->add_option("--smax", v.smax);
  cmd_verify->add_option("--rmax", v.rmax);
  cmd_verify->add_option("--jobs", v.jobs, "parallel suites");
  cmd_verify->add_flag("--timing", v.timing, "include wall time in the report");
  cmd_verify->add_option("--out", v.out);

  // counterexample
  std::string x_which = "72", x_group, x_out;
  auto* cmd_cex = app.add_subcommand("counterexample", "run a counterexample driver");
  cmd_cex->add_option("--which", x_which, "72 or 73")->required();
  cmd_cex->add_option("--group", x_group);
  cmd_cex->add_option("--out", x_out);

  // cosetlogic
  std::string c_file, c_y, c_out;
  bool c_sweep = false;
  auto* cmd_coset = app.add_subcommand("cosetlogic", "coset-combination membership checks");
  cmd_coset->add_option("--file", c_file, "coset-system JSON file")->required();
  cmd_coset->add_option("--y", c_y, "comma-separated tuple to test");
  cmd_coset->add_flag("--sweep", c_sweep, "sweep every ambient element against brute force");
  cmd_coset->add_option("--out", c_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_group->parsed()) {
      auto g = make_group(parse_group_spec(g_spec));
      json j;
      j["spec"] = g->spec().to_string();
      if (auto r = g->finite_rank()) {
        j["universe"] = "finite";
        j["size"] = *r;
      } else {
        j["universe"] = "omega";
      }
      j["cells"] = json::array();
      for (const auto& cd : g->cells())
        j["cells"].push_back({{"cell", cd.id}, {"modulus", cd.modulus.str()}});
      std::cout << j.dump(2) << "\n";
      return kExitPass;
    }
    if (cmd_member->parsed()) {
      auto g = make_group(parse_group_spec(m_group));
      auto s = parse_subgroup_expr(m_sub, g);
      auto x = parse_element(m_elem, g);
      bool in = member(s, x);
      if (m_oracle) {
        bool oracle = member_oracle(g, s.expr, x);
        std::cout << (in ? "true" : "false") << " (oracle " << (oracle ? "true" : "false")
                  << ")\n";
        return in == oracle ? kExitPass : kExitViolation;
      }
      std::cout << (in ? "true" : "false") << "\n";
      return kExitPass;
    }
    if (cmd_spine->parsed()) {
      auto g = make_group(parse_group_spec(s_group));
      auto x = parse_element(s_elem, g);
      auto t = spine_maps(g, Int(s_n), x);
      json j;
      j["s_point"] = t.s_point.to_string();
      j["t_point"] = t.t_point.to_string();
      j["t_plus_point"] = t.t_plus_point.to_string();
      j["t_plus_empty_intersection"] = t.t_plus_empty_intersection;
      std::cout << j.dump(2) << "\n";
      return kExitPass;
    }
    if (cmd_index->parsed()) {
      auto g = make_group(parse_group_spec(i_group));
      auto a = parse_subgroup_expr(i_a, g);
      auto b = parse_subgroup_expr(i_b, g);
      emit(index(a, b, i_cap).to_json(), i_out);
      return kExitPass;
    }
    if (cmd_dim->parsed()) {
      auto rows = dim_profile(parse_group_spec(d_group), Int(d_p), d_smax, d_cap);
      emit(dim_profile_csv(rows), d_out);
      for (const auto& r : rows)
        if (!r.dim.is_finite()) return kExitInconclusive;
      return kExitPass;
    }
    if (cmd_verify->parsed()) return run_verify(v);
    if (cmd_cex->parsed()) {
      LemmaCase c;
      c.id = x_which == "72" ? "cex72" : "cex73";
      c.spec = x_group.empty() ? default_spec_for(c.id) : parse_group_spec(x_group);
      c.seed = default_seed();
      c.samples = 200;
      auto rep = run_lemma_suite(c);
      emit(rep.to_json(), x_out);
      return rep.passed() ? kExitPass : kExitViolation;
    }
    if (cmd_coset->parsed()) {
      std::ifstream in(c_file);
      if (!in) throw Error("cannot open " + c_file);
      std::stringstream buf;
      buf << in.rdbuf();
      auto parsed = cosetlogic::from_json(buf.str());
      auto violations = cosetlogic::validate_system(parsed.sys, parsed.amb);
      json j;
      j["valid"] = violations.empty();
      j["violations"] = json::array();
      for (const auto& vio : violations) j["violations"].push_back(vio.what);
      if (!violations.empty()) {
        emit(j.dump(2), c_out);
        return kExitViolation;
      }
      if (!c_y.empty()) {
        cosetlogic::Tuple y;
        std::stringstream ys(c_y);
        std::string tok;
        while (std::getline(ys, tok, ',')) y.push_back(std::stoll(tok));
        bool crit = cosetlogic::saturation_membership(parsed.sys, parsed.gprime, parsed.amb, y);
        bool brute = cosetlogic::brute_membership(parsed.sys, parsed.gprime, parsed.amb, y);
        j["y"] = y;
        j["criterion"] = crit;
        j["brute"] = brute;
        emit(j.dump(2), c_out);
        return crit == brute ? kExitPass : kExitViolation;
      }
      if (c_sweep) {
        std::size_t mismatches = 0;
        for (std::int64_t code = 0; code < parsed.amb.order(); ++code) {
          auto y = parsed.amb.decode(code);
          if (cosetlogic::saturation_membership(parsed.sys, parsed.gprime, parsed.amb, y) !=
              cosetlogic::brute_membership(parsed.sys, parsed.gprime, parsed.amb, y))
            ++mismatches;
        }
        j["sweep_size"] = parsed.amb.order();
        j["mismatches"] = mismatches;
        emit(j.dump(2), c_out);
        return mismatches == 0 ? kExitPass : kExitViolation;
      }
      emit(j.dump(2), c_out);
      return kExitPass;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownLemma& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IncompatibleFamily& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const WrongFamily& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownConvex& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitUsage;
}
