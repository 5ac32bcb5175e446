#ifndef CKALG_CLI_HPP
#define CKALG_CLI_HPP

#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ckalg/cocycle.hpp"
#include "ckalg/ktheory.hpp"
#include "ckalg/oracle.hpp"
#include "ckalg/rokhlin.hpp"
#include "ckalg/shift.hpp"
#include "ckalg/witness.hpp"

// Command bodies of the command-line tool, kept here so tests can call them.
namespace ckalg::cli {

// Sorted key=value lines; prose only when asked for.
struct Report {
  std::map<std::string, std::string> values;
  std::vector<std::string> prose;

  void set(const std::string& key, const std::string& value) { values[key] = value; }
  void set(const std::string& key, bool value) { values[key] = value ? "true" : "false"; }
  void set(const std::string& key, long value) { values[key] = std::to_string(value); }
  void set(const std::string& key, int value) { values[key] = std::to_string(value); }
  void set(const std::string& key, std::size_t value) { values[key] = std::to_string(value); }
  void explain(const std::string& line) { prose.push_back(line); }

  const std::string& at(const std::string& key) const { return values.at(key); }

  std::string render(bool with_prose = false) const {
    std::string out;
    for (const auto& [k, v] : values) out += k + "=" + v + "\n";
    if (with_prose)
      for (const auto& line : prose) out += "# " + line + "\n";
    return out;
  }
};

inline std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string scientific(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string indexed(const std::string& key, long i) { return key + "[" + std::to_string(i) + "]"; }
inline std::string indexed(const std::string& key, long i, long j) { return indexed(key, i) + "[" + std::to_string(j) + "]"; }

// ---- analyze ----

inline Report cmd_analyze(const ZeroOneMatrix& a) {
  Report rep;
  const CKAlgebra alg(a);
  const auto m = is_aperiodic(a);
  rep.set("valid", true);
  rep.set("n", a.size());
  rep.set("aperiodic", m.has_value());
  if (m) rep.set("m", *m);
  rep.set("kirchberg", std::string(m ? "reported" : "not_reported"));
  rep.set("permutation", is_permutation(a));
  rep.set("classes", a.column_classes().size());
  rep.set(indexed("commutant_dim", 1), diagonal_commutant_basis(alg, 1).size());
  if (m) rep.explain("A^" + std::to_string(*m) + " is positive; O_A is then a unital Kirchberg algebra (external theorem, reported only).");
  else rep.explain("no power of A is positive.");
  rep.explain("classes counts the column-equality classes, i.e. the minimal projections of the algebra generated by the q_i.");
  return rep;
}

inline Report cmd_analyze_file(const std::string& matrix_path) { return cmd_analyze(parse_matrix(read_file(matrix_path))); }

inline Report cmd_analyze_graph_file(const std::string& graph_path) {
  const FiniteGraph g = parse_graph(read_file(graph_path));
  Report rep = cmd_analyze(edge_matrix(g));
  rep.set("graph_aperiodic", is_strongly_connected_aperiodic(g));
  return rep;
}

// ---- action ----

struct ActionOptions {
  bool verify = false;
  bool oracle = false;              // --verify oracle
  std::optional<int> cocycle;       // K
  std::optional<int> witness_level;
  double witness_eps = 1e-6;
  std::optional<int> fixed;         // k
  WitnessOptions search;
};

inline Report cmd_witness(const CKAlgebra& alg, const ActionSpec& spec, int level, double eps, const WitnessOptions& opt) {
  Report rep;
  const auto action = verify_action(alg, spec);
  for (std::size_t t = 0; t < spec.generators(); ++t) {
    const auto trace = witness_search(alg, spec, action.unitaries[t].element(), level, eps, opt);
    bool monotone = true;
    for (const auto& lv : trace) {
      rep.set(indexed("defect", static_cast<long>(t), lv.level), scientific(lv.defect));
      rep.set(indexed("evaluations", static_cast<long>(t), lv.level), lv.evaluations);
      if (lv.level > 0) monotone = monotone && lv.defect <= trace[static_cast<std::size_t>(lv.level - 1)].defect;
    }
    rep.set(indexed("monotone", static_cast<long>(t)), monotone);
    rep.set(indexed("reached_eps", static_cast<long>(t)), trace.back().defect <= eps);
  }
  rep.set("seed", std::to_string(opt.seed));
  rep.explain("defect[t][k] = min ||u_t - w phi(w)^*|| over unitaries w of the level-k fixed-point commutant core found by local search.");
  rep.explain("No threshold is asserted; the trace is carried forward, so it never increases.");
  return rep;
}

inline Report cmd_action(const ZeroOneMatrix& a, const std::string& action_text, const ActionOptions& opt) {
  const CKAlgebra alg(a);
  const ActionSpec spec = parse_action(action_text, alg.n());
  Report rep;
  std::string group;
  for (int o : spec.orders) group += (group.empty() ? "" : ",") + std::to_string(o);
  rep.set("group", group);
  rep.set("generators", spec.generators());
  for (std::size_t t = 0; t < spec.generators(); ++t) rep.set(indexed("unitary", static_cast<long>(t)), spec.unitary(alg, t).str());

  const bool needs_verified = opt.verify || opt.oracle || opt.cocycle || opt.witness_level;
  std::optional<VerifiedAction> action;
  if (needs_verified) {
    action = verify_action(alg, spec);
    rep.set("action", std::string("verified"));
    rep.explain("each generator unitary commutes with the q_i, has the declared order and the generators commute.");
  }
  if (opt.oracle) {
    bool ok = true;
    for (const auto& u : action->unitaries) {
      const CKElement& x = u.element();
      const int d = 2 * generator_length(x) + 1;
      ok = ok && oracle_check({x, x.adjoint()}, alg.unit(), std::max(12, 2 * d + 1), d);
      for (int i = 1; i <= alg.n(); ++i) ok = ok && oracle_check({x, alg.s(i)}, lambda_apply(alg, x, alg.s(i)), std::max(12, 2 * d + 1), d);
    }
    rep.set("oracle", std::string(ok ? "pass" : "fail"));
  }
  if (opt.cocycle) {
    ChainReport total;
    for (std::size_t t = 0; t < spec.generators(); ++t) {
      const auto r = chain_identities(alg, CocycleChain::build(alg, action->unitaries[t].element(), *opt.cocycle), spec.orders[t]);
      total.powers_checked += r.powers_checked;
      total.cocycle_checked += r.cocycle_checked;
      total.commutators_checked += r.commutators_checked;
      total.intertwinings_checked += r.intertwinings_checked;
    }
    rep.set("identities", std::string("pass"));
    rep.set("cocycle_K", *opt.cocycle);
    rep.set("identities_checked", total.powers_checked + total.cocycle_checked + total.commutators_checked + total.intertwinings_checked);
    rep.explain("chain entries u_k^n = 1, u_i^* u_{i+j} = phi^i(u_j), commuting shifts and the intertwining relation hold exactly.");
  }
  if (opt.fixed) rep.set(indexed("fixed_core_dim", *opt.fixed), fixed_point_core_basis(alg, spec, *opt.fixed).size());
  if (opt.witness_level) {
    const Report w = cmd_witness(alg, spec, *opt.witness_level, opt.witness_eps, opt.search);
    for (const auto& [k, v] : w.values) rep.set("witness_" + k, v);
    for (const auto& line : w.prose) rep.explain(line);
  }
  return rep;
}

// ---- ktheory ----

inline Report cmd_ktheory(const ZeroOneMatrix& a) {
  Report rep;
  const O2Verdict v = is_O2(a);
  rep.set("K0", v.groups.k0_str());
  rep.set("K1", v.groups.k1_str());
  rep.set("O2", v.value);
  rep.set("aperiodic", v.aperiodicity.has_value());
  if (v.aperiodicity) rep.set("m", *v.aperiodicity);
  rep.explain("K0 = coker(I - A^t), K1 = ker(I - A^t).");
  rep.explain(v.explanation);
  return rep;
}

// ---- rokhlin-demo ----

inline Report cmd_rokhlin_demo(int r, int order, const std::string& model = "scalar") {
  RokhlinModel m;
  if (model == "scalar") m = RokhlinModel::scalar(r, order);
  else if (model == "2x2") m = RokhlinModel::two_by_two(r, order);
  else fail(ErrorKind::Parse, "unknown model '" + model + "'");
  const AveragingReport a = build_averaged_unitary(m);
  Report rep;
  rep.set("model", model);
  rep.set("r", r);
  rep.set("order", order);
  rep.set("defect", fixed(a.defect));
  rep.set("bound", fixed(a.bound));
  rep.set("pass", a.defect <= a.bound);
  rep.set("defect_tower0", fixed(a.defect_tower0));
  rep.set("defect_tower1", fixed(a.defect_tower1));
  rep.set("unitarity", scientific(a.unitarity));
  rep.explain("defect = ||z alpha(z)^* - u|| for the tower-averaged unitary z; bound = 2 pi / r.");
  return rep;
}

// ---- shift ----

struct ShiftOptions {
  std::string element = "1";
  int phi_power = 1;
  std::optional<std::vector<int>> corner;  // i j k
  std::optional<std::vector<int>> fullness;  // i j
};

inline Report cmd_shift(const ZeroOneMatrix& a, const ShiftOptions& opt) {
  const CKAlgebra alg(a);
  const CKElement x = alg.parse(opt.element);
  Report rep;
  rep.set("element", x.str());
  rep.set(indexed("phi", opt.phi_power), phi_power(alg, x, opt.phi_power, true).str());
  if (opt.corner) {
    if (opt.corner->size() != 3) fail(ErrorKind::Parse, "--corner takes i j k");
    const auto& c = *opt.corner;
    const CornerReport cr = corner_formula_check(alg, c[0], c[1], c[2], x);
    rep.set("corner.equal", cr.equal);
    rep.set("corner.lhs", cr.lhs.str());
    rep.set("corner.rhs", cr.rhs.str());
    std::string words;
    for (const auto& w : cr.words) words += (words.empty() ? "" : ",") + w.str();
    rep.set("corner.words", words.empty() ? std::string("none") : words);
    rep.explain("corner.lhs = r_j phi^k(r_i x r_i) r_j, corner.rhs = sum over the listed words of s_nu (r_i x r_i) s_nu^*.");
  }
  if (opt.fullness) {
    if (opt.fullness->size() != 2) fail(ErrorKind::Parse, "--fullness takes i j");
    const FullnessWitness f = fullness_witness(alg, (*opt.fullness)[0], (*opt.fullness)[1], x);
    rep.set("fullness.m", f.m);
    rep.set("fullness.mu", f.mu.str());
    rep.set("fullness.certificate", f.certificate.str());
  }
  rep.explain("phi(x) = sum_i s_i x s_i^*; images are printed in literal syntax.");
  return rep;
}

}  // namespace ckalg::cli

#endif  // CKALG_CLI_HPP
