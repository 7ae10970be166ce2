#include "graphfair/cli.hpp"

#include "graphfair/error.hpp"
#include "graphfair/fairness.hpp"
#include "graphfair/moving_knife.hpp"
#include "graphfair/structure.hpp"
#include "graphfair/tangle_analysis.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

namespace graphfair {

namespace {

using Json = nlohmann::ordered_json;

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

// Flat key-value record of one invocation, printed as `# key=value` lines.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
      if (k == key) {
        v = value;
        return;
      }
    entries_.emplace_back(key, value);
  }
  void input(const std::string& role, const std::string& path) {
    set("input." + role, path);
    set("input." + role + ".sha256", sha256_file(path));
  }
  void print(std::ostream& out) const {
    out << "# manifest\n";
    for (const auto& [k, v] : entries_) out << "# " << k << '=' << v << '\n';
  }
  Json json() const {
    Json j = Json::object();
    for (const auto& [k, v] : entries_) j[k] = v;
    return j;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct Common {
  bool json = false;
  std::uint64_t seed = 0;
  EnumerationCaps caps;
};

Json allocation_json(const Multigraph& g, const Allocation& a) {
  Json bundles = Json::array();
  for (const auto& b : a.bundles) {
    Json names = Json::array();
    for (VertexId v : b) names.push_back(g.vertex_name(v));
    bundles.push_back(names);
  }
  return bundles;
}

Json report_json(const Multigraph& g, const EnvyReport& r) {
  Json j;
  j["k"] = r.k;
  j["efk_outer"] = r.efk_outer;
  j["empty_bundle"] = r.has_empty_bundle;
  Json own = Json::array();
  for (const auto& q : r.own_values) own.push_back(to_string(q));
  j["own_values"] = own;
  Json pairs = Json::array();
  for (const auto& pe : r.pairs) {
    Json p;
    p["envier"] = pe.envier + 1;
    p["envied"] = pe.envied + 1;
    p["envy"] = to_string(pe.envy);
    if (pe.witness) {
      Json w = Json::array();
      for (VertexId v : *pe.witness) w.push_back(g.vertex_name(v));
      p["witness"] = w;
    } else {
      p["witness"] = nullptr;
    }
    pairs.push_back(p);
  }
  j["pairs"] = pairs;
  return j;
}

void set_caps(Manifest& m, const Common& c) {
  m.set("seed", std::to_string(c.seed));
  m.set("caps.max_vertices", std::to_string(c.caps.max_vertices));
  m.set("caps.max_agents", std::to_string(c.caps.max_agents));
}

std::string join_names(const std::vector<std::string>& parts) {
  std::string s = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s + "}";
}

void emit(std::ostream& out, const Common& c, const Json& body, const Manifest& m, const std::string& text) {
  if (c.json) {
    Json j = body;
    j["manifest"] = m.json();
    out << j.dump(2) << '\n';
    return;
  }
  out << text;
  m.print(out);
}

int cmd_classify(const std::string& path, const Common& c, std::ostream& out) {
  const Multigraph g = read_graph_file(path);
  const Classification cl = classify_stringable(g);
  const Threshold th = gap_threshold(g);
  Manifest m;
  m.set("command", "classify");
  m.input("graph", path);
  set_caps(m, c);
  std::ostringstream text;
  if (cl.stringable) text << "Stringable(" << to_string(*cl.kind) << ")";
  else text << "NonStringable, epsilon-sigma3=" << cl.excess;
  text << ", gap_threshold=" << to_string(th) << '\n';
  text << "degree_sequence=" << cl.sequence.to_string() << " edges=" << cl.sequence.edges
       << " sigma3=" << cl.sequence.sigma3 << '\n';
  m.set("outcome", cl.stringable ? "stringable" : "non_stringable");
  m.set("verification", "exact");
  Json body;
  body["command"] = "classify";
  body["stringable"] = cl.stringable;
  body["kind"] = cl.kind ? Json(to_string(*cl.kind)) : Json(nullptr);
  body["epsilon_minus_sigma3"] = cl.excess;
  body["degree_sequence"] = cl.sequence.counts;
  body["gap_threshold"] = th.value ? Json(*th.value) : Json("inf");
  emit(out, c, body, m, text.str());
  return kSuccess;
}

int cmd_threshold(const std::string& path, bool generalized, bool relax, const Common& c, std::ostream& out) {
  const Multigraph g = read_graph_file(path);
  Manifest m;
  m.set("command", "threshold");
  m.input("graph", path);
  set_caps(m, c);
  std::ostringstream text;
  Json body;
  body["command"] = "threshold";
  const auto report = [&](const std::string& key, const Threshold& t) {
    text << key << '=' << to_string(t);
    if (t.value) text << " witness=" << join_names(t.part_names);
    text << '\n';
    body[key] = t.value ? Json(*t.value) : Json("inf");
    if (t.value) body[key + "_witness"] = t.part_names;
  };
  report("gap_threshold", gap_threshold(g));
  if (generalized || relax) {
    report("generalized_gap_threshold", generalized_gap_threshold(g));
    if (relax) report("generalized_gap_threshold_relaxed", generalized_gap_threshold(g, {.relax_connectivity = true}));
  }
  m.set("outcome", "computed");
  m.set("verification", "exact");
  emit(out, c, body, m, text.str());
  return kSuccess;
}

int cmd_solve(const std::string& graph_path, const std::string& val_path, std::size_t agents, bool trace,
              bool verify, const std::string& out_path, const Common& c, std::ostream& out, std::ostream& err) {
  if (agents != 2 && agents != 3) throw InputError("--agents must be 2 or 3");
  const Multigraph g = read_graph_file(graph_path);
  const ValuationProfile profile = read_valuation_file(val_path, g, agents);
  Manifest m;
  m.set("command", "solve");
  m.input("graph", graph_path);
  m.input("valuations", val_path);
  m.set("agents", std::to_string(agents));
  set_caps(m, c);
  KnifeOptions options;
  options.verify = verify;
  options.monotone_seed = c.seed;

  std::optional<Allocation> allocation;
  std::vector<TraceEntry> steps;
  if (agents == 2) {
    allocation = two_agent_ef1(g, profile, options);
    m.set("procedure", "cut_and_choose");
  } else {
    LipsRun run = lips_ef1_three(g, profile, options);
    steps = run.trace;
    allocation = std::move(run.allocation);
    m.set("procedure", "lips_three_stage");
    m.set("final_stage", std::to_string(run.stage));
    m.set("form", run.state.form == KnifeForm::I ? "i" : "ii");
  }
  if (trace) {
    std::size_t stage = 0;
    for (const auto& t : steps) {
      if (t.stage != stage) err << "stage=" << (stage = t.stage) << '\n';
      err << "step=" << to_string(t.step) << " l=" << t.l << " r=" << t.r << " shouters={";
      for (std::size_t i = 0; i < t.shouters.size(); ++i) err << (i ? "," : "") << t.shouters[i] + 1;
      err << "}\n";
    }
  }
  if (!allocation) {
    m.set("outcome", "absent");
    m.set("verification", "block tree is not a path");
    Json body;
    body["command"] = "solve";
    body["allocation"] = nullptr;
    emit(out, c, body, m, "no bipolar numbering: the block tree is not a path\n");
    return kNegative;
  }
  const EnvyReport report = envy_report(g, *allocation, profile, 1);
  if (verify && !report.efk_outer) throw InvariantViolation("solver output failed EF1_outer verification");
  m.set("outcome", "allocation");
  m.set("verification", report.efk_outer ? "ef1_outer_certified" : "failed");

  std::ostringstream text;
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw InputError("cannot write '" + out_path + "'");
    write_allocation(file, g, *allocation);
    write_envy_report(file, g, report);
    m.set("output.allocation", out_path);
    text << "allocation written to " << out_path << '\n';
  } else {
    write_allocation(text, g, *allocation);
  }
  write_envy_report(text, g, report);
  Json body;
  body["command"] = "solve";
  body["allocation"] = allocation_json(g, *allocation);
  body["envy_report"] = report_json(g, report);
  emit(out, c, body, m, text.str());
  return kSuccess;
}

int cmd_verify(const std::string& graph_path, const std::string& val_path, const std::string& alloc_path,
               std::size_t k, std::size_t agents, const Common& c, std::ostream& out) {
  const Multigraph g = read_graph_file(graph_path);
  if (agents == 0) agents = std::max(max_agent_in_file(alloc_path), max_agent_in_file(val_path));
  if (agents == 0) throw InputError("cannot infer the agent count; pass --agents");
  const ValuationProfile profile = read_valuation_file(val_path, g, agents);
  const Allocation a = read_allocation_file(alloc_path, g, agents);
  Manifest m;
  m.set("command", "verify");
  m.input("graph", graph_path);
  m.input("valuations", val_path);
  m.input("allocation", alloc_path);
  m.set("agents", std::to_string(agents));
  m.set("k", std::to_string(k));
  set_caps(m, c);
  Json body;
  body["command"] = "verify";
  for (std::size_t i = 0; i < a.agent_count(); ++i)
    if (!is_contiguous(g, a.bundles[i])) {
      m.set("outcome", "rejected");
      m.set("verification", "non_contiguous_bundle");
      body["efk_outer"] = false;
      body["reason"] = "bundle of agent " + std::to_string(i + 1) + " is not contiguous";
      emit(out, c, body, m, "rejected: bundle of agent " + std::to_string(i + 1) + " is not contiguous\n");
      return kNegative;
    }
  const EnvyReport report = envy_report(g, a, profile, k);
  m.set("outcome", report.efk_outer ? "accepted" : "rejected");
  m.set("verification", "exhaustive_removal_sets");
  std::ostringstream text;
  text << (report.efk_outer ? "accepted" : "rejected") << ": EF" << k << "_outer "
       << (report.efk_outer ? "holds" : "fails") << '\n';
  write_envy_report(text, g, report);
  body["efk_outer"] = report.efk_outer;
  body["envy_report"] = report_json(g, report);
  emit(out, c, body, m, text.str());
  return report.efk_outer ? kSuccess : kNegative;
}

int cmd_counterexample(const std::string& path, std::size_t agents, std::size_t k, bool certify_it,
                       const std::string& prefix, const Common& c, std::ostream& out, std::ostream& err) {
  const Multigraph g = read_graph_file(path);
  const Multigraph sk = smooth(g);
  Threshold th = gap_threshold(sk);
  if (!th.value) th = generalized_gap_threshold(sk);
  Manifest m;
  m.set("command", "counterexample");
  m.input("graph", path);
  m.set("n", std::to_string(agents));
  m.set("k", std::to_string(k));
  set_caps(m, c);
  Json body;
  body["command"] = "counterexample";
  if (!th.value) {
    m.set("outcome", "no_gap2_cutset");
    m.set("verification", "exact");
    body["instance"] = nullptr;
    emit(out, c, body, m, "no gap >= 2 cutset exists; no counterexample can be generated\n");
    return kNegative;
  }
  NegativeInstance inst = negative_instance(sk, *th.witness, agents, k);
  if (certify_it) certify(inst, c.caps);

  m.set("cutset", join_names(th.part_names));
  m.set("b", to_string(inst.envy_bound));
  m.set("scale", to_string(inst.scale));
  std::string jtable;
  Json jlist = Json::array();
  for (std::size_t i = 0; i < inst.valued_edges.size(); ++i) {
    const Edge& e = sk.edge(inst.valued_edges[i]);
    const std::string label = sk.vertex_name(e.u) + "-" + sk.vertex_name(e.v) + "#" + std::to_string(e.id);
    jtable += (i ? "," : "") + label + ":" + std::to_string(inst.subdivisions[i]);
    jlist.push_back({{"edge", label}, {"mu", to_string(inst.edge_values[i])}, {"J", inst.subdivisions[i]}});
  }
  m.set("J", jtable);
  m.set("vertices", std::to_string(inst.graph.vertex_count()));
  m.set("bounds", bounds_hold(inst) ? "checked" : "violated");
  m.set("outcome", "instance");
  m.set("verification", to_string(inst.status));
  if (inst.certificate) m.set("allocations_checked", std::to_string(inst.certificate->allocations_checked));

  std::ostringstream graph_text, val_text, text;
  write_graph(graph_text, inst.graph);
  write_valuations(val_text, inst.graph, ValuationProfile::common(Valuation(inst.valuation), 1));
  if (!prefix.empty()) {
    std::ofstream(prefix + ".graph") << graph_text.str();
    std::ofstream(prefix + ".val") << val_text.str();
    m.set("output.graph", prefix + ".graph");
    m.set("output.valuations", prefix + ".val");
    std::ofstream manifest_file(prefix + ".manifest");
    m.print(manifest_file);
    text << "instance written to " << prefix << ".{graph,val,manifest}\n";
  } else {
    text << "# graph file\n" << graph_text.str() << "# valuation file\n" << val_text.str();
  }
  text << "# status " << to_string(inst.status) << '\n';
  body["graph_vertices"] = inst.graph.vertex_count();
  body["b"] = to_string(inst.envy_bound);
  body["edges"] = jlist;
  body["status"] = to_string(inst.status);
  emit(out, c, body, m, text.str());
  if (inst.status == Verification::Refuted) return kNegative;
  if (inst.status == Verification::UnverifiedAtDeskScale) {
    err << "oracle caps exceeded: instance has " << inst.graph.vertex_count() << " vertices (max_vertices "
        << c.caps.max_vertices << "), " << agents << " agents (max_agents " << c.caps.max_agents << ")\n";
    return kCapExceeded;
  }
  return kSuccess;
}

int cmd_oracle(const std::string& graph_path, const std::string& val_path, std::size_t agents, std::size_t k,
               const Common& c, std::ostream& out) {
  const Multigraph g = read_graph_file(graph_path);
  const ValuationProfile profile = read_valuation_file(val_path, g, agents);
  const OracleResult r = exists_efk_outer(g, profile, k, c.caps);
  Manifest m;
  m.set("command", "oracle");
  m.input("graph", graph_path);
  m.input("valuations", val_path);
  m.set("n", std::to_string(agents));
  m.set("k", std::to_string(k));
  set_caps(m, c);
  m.set("partitions_checked", std::to_string(r.partitions_checked));
  m.set("allocations_checked", std::to_string(r.allocations_checked));
  m.set("symmetry_reduced", r.symmetry_reduced ? "true" : "false");
  Json body;
  body["command"] = "oracle";
  std::ostringstream text;
  if (!r.allocation) {
    m.set("outcome", "absent");
    m.set("verification", "exhaustive");
    text << "no contiguous EF" << k << "_outer allocation exists (all " << r.allocations_checked
         << " allocations checked)\n";
    body["allocation"] = nullptr;
    body["allocations_checked"] = r.allocations_checked;
    emit(out, c, body, m, text.str());
    return kNegative;
  }
  const EnvyReport report = envy_report(g, *r.allocation, profile, k);
  m.set("outcome", "found");
  m.set("verification", report.efk_outer ? "ef" + std::to_string(k) + "_outer_certified" : "failed");
  write_allocation(text, g, *r.allocation);
  write_envy_report(text, g, report);
  body["allocation"] = allocation_json(g, *r.allocation);
  body["envy_report"] = report_json(g, report);
  emit(out, c, body, m, text.str());
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fair division on graphs: classification, thresholds, solvers and certificates"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--json", common.json, "Emit JSON instead of text");
  app.add_option("--seed", common.seed, "Seed for randomized checks");
  app.add_option("--max-vertices", common.caps.max_vertices, "Oracle vertex cap");
  app.add_option("--max-agents", common.caps.max_agents, "Oracle agent cap");

  std::string graph, vals, alloc, out_path, prefix;
  std::size_t agents = 0, k = 1, n = 0;
  bool generalized = false, relax = false, trace = false, verify = false, certify_flag = false;

  auto* classify = app.add_subcommand("classify", "Stringability and gap threshold of a skeleton");
  classify->add_option("graph", graph)->required();

  auto* threshold = app.add_subcommand("threshold", "Gap thresholds");
  threshold->add_option("graph", graph)->required();
  threshold->add_flag("--generalized", generalized);
  threshold->add_flag("--relax-connectivity", relax);

  auto* solve = app.add_subcommand("solve", "Constructive EF1_outer allocation");
  solve->add_option("graph", graph)->required();
  solve->add_option("valuations", vals)->required();
  solve->add_option("--agents", agents)->required();
  solve->add_flag("--trace", trace);
  solve->add_flag("--verify", verify);
  solve->add_option("--out", out_path);

  auto* verify_cmd = app.add_subcommand("verify", "Check an allocation for EFk_outer");
  verify_cmd->add_option("graph", graph)->required();
  verify_cmd->add_option("valuations", vals)->required();
  verify_cmd->add_option("allocation", alloc)->required();
  verify_cmd->add_option("--k", k)->required();
  verify_cmd->add_option("--agents", agents);

  auto* counter = app.add_subcommand("counterexample", "Negative-transfer instance from a gap >= 2 cutset");
  counter->add_option("graph", graph)->required();
  counter->add_option("--n", n)->required();
  counter->add_option("--k", k)->required();
  counter->add_flag("--certify", certify_flag);
  counter->add_option("--out-prefix", prefix);

  auto* oracle = app.add_subcommand("oracle", "Exhaustive EFk_outer existence check");
  oracle->add_option("graph", graph)->required();
  oracle->add_option("valuations", vals)->required();
  oracle->add_option("--n", n)->required();
  oracle->add_option("--k", k)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (*classify) return cmd_classify(graph, common, out);
    if (*threshold) return cmd_threshold(graph, generalized, relax, common, out);
    if (*solve) return cmd_solve(graph, vals, agents, trace, verify, out_path, common, out, err);
    if (*verify_cmd) return cmd_verify(graph, vals, alloc, k, agents, common, out);
    if (*counter) return cmd_counterexample(graph, n, k, certify_flag, prefix, common, out, err);
    if (*oracle) return cmd_oracle(graph, vals, n, k, common, out);
  } catch (const CapExceeded& e) {
    err << e.what() << '\n';
    return kCapExceeded;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvariantViolation& e) {
    err << "internal invariant violated: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace graphfair
