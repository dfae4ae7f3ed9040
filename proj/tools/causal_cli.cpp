// causal: batch front end for causal theories, action domains, argument
// systems and S5 theories. Exit codes: 0 ok, 1 usage, 2 bad input or
// capacity, 3 internal disagreement, 4 proof search gave up.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "causal/action.hpp"
#include "causal/argumentation.hpp"
#include "causal/turner.hpp"

using namespace causal;
using Json = nlohmann::ordered_json;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Disagreement : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GaveUp : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  bool timing = false;
  std::size_t max_atoms = kDefaultMaxAtoms;
  std::string proof_out;
};

std::string fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Input {
  std::string path, text;
};

Input read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return {path, ss.str()};
}

// Parse errors carry a position; prefix it with the source name.
template <class F>
auto parsing(const std::string& source, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    std::string where = source;
    if (e.line()) where += ":" + std::to_string(e.line()) + ":" + std::to_string(e.column());
    else where += ":offset " + std::to_string(e.offset());
    throw InputError(where + ": " + e.detail());
  } catch (const CapacityError& e) {
    throw InputError(source + ": " + e.what());
  } catch (const DomainError& e) {
    throw InputError(source + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(source + ": " + e.what());
  }
}

class Report {
 public:
  Report(std::string command, const Options& o) : opts_(o), start_(std::chrono::steady_clock::now()) {
    json_["command"] = std::move(command);
    json_["inputs"] = Json::object();
  }
  void input(const Input& in) {
    json_["inputs"][in.path] = "fnv1a:" + fnv1a(in.text);
    text_ += "# " + in.path + "  fnv1a:" + fnv1a(in.text) + "\n";
  }
  void argument(const std::string& key, const std::string& value) {
    json_["arguments"][key] = value;
    text_ += "# " + key + ": " + value + "\n";
  }
  Json& results() { return json_["results"]; }
  std::string& text() { return text_; }

  void print(std::ostream& out) {
    auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    if (opts_.json) {
      if (opts_.timing) json_["timing_ms"] = elapsed;
      out << json_.dump(2) << '\n';
    } else {
      out << text_;
      if (opts_.timing) out << "# elapsed " << elapsed << " ms\n";
    }
  }

 private:
  const Options& opts_;
  std::chrono::steady_clock::time_point start_;
  Json json_;
  std::string text_;
};

std::string bits(const Model& m) {
  std::string out;
  for (std::size_t i = 0; i < m.universe().size(); ++i) out += m.value(i) ? "1 " : "0 ";
  if (!out.empty()) out.pop_back();
  return out;
}

CausalTheory load_theory(const Input& in, const Options& o) {
  auto t = parsing(in.path, [&] { return parse_theory(in.text); });
  parsing(in.path, [&] {
    check_capacity(t.universe().size(), o.max_atoms);
    return 0;
  });
  return t;
}

int cmd_models(const std::string& path, const Options& o) {
  Input in = read_input(path);
  CausalTheory t = load_theory(in, o);
  Report r("models", o);
  r.input(in);
  Semantics sem(t, o.max_atoms);
  Json rows = Json::array();
  std::string& out = r.text();
  for (const auto& a : t.universe().atoms()) out += a + " ";
  out += "| explained successors\n";
  std::size_t explained = 0;
  for (const auto& m : enumerate_models(t.universe(), o.max_atoms)) {
    bool e = sem.explained(m.index());
    explained += e;
    std::size_t succ = sem.closure(m.index()).count();
    out += bits(m) + (t.universe().size() ? " " : "") + "| " + (e ? "yes" : "no ") + "       " +
           std::to_string(succ) + "\n";
    rows.push_back({{"model", m.to_string()}, {"explained", e}, {"successors", succ}});
  }
  out += std::to_string(explained) + " of " + std::to_string(rows.size()) + " models explained\n";
  r.results()["models"] = rows;
  r.results()["explained"] = explained;
  r.print(std::cout);
  return 0;
}

int cmd_entail(const std::string& path, const std::string& sequent, const Options& o) {
  Input in = read_input(path);
  CausalTheory t = load_theory(in, o);
  Report r("entail", o);
  r.input(in);
  r.argument("sequent", sequent);
  auto st = parsing("sequent", [&] { return parse_sequent_text(sequent, ParseOptions{&t.universe(), "[]"}); });
  Sequent s{st.left, st.right};

  const bool semantic = modal_entails_semantic(s.left, s.right, t);
  auto outcome = prove_cut_free(s, t);
  if (outcome.status == SearchStatus::Exhausted) throw GaveUp(outcome.message);
  const bool proved = outcome.status == SearchStatus::Proved;
  if (proved != semantic)
    throw Disagreement(std::string("proof search says ") + (proved ? "provable" : "unprovable") +
                       " but the semantics says " + (semantic ? "valid" : "invalid"));
  Json& res = r.results();
  std::string& out = r.text();
  res["sequent"] = to_string(s);
  if (proved) {
    if (auto c = check_proof(outcome.proof, t); !c) throw Disagreement("proof rejected by the checker: " + c.reason);
    std::string text = serialize_proof(outcome.proof);
    res["verdict"] = "PROVABLE";
    res["proof_size"] = proof_size(outcome.proof);
    res["proof"] = text;
    out += "PROVABLE  " + to_string(s) + "\n";
    if (o.proof_out.empty()) out += text;
    if (!o.proof_out.empty()) {
      std::ofstream f(o.proof_out);
      if (!f) throw InputError(o.proof_out + ": cannot write");
      f << text;
      out += "proof written to " + o.proof_out + "\n";
    }
  } else {
    const Model& m = *outcome.countermodel;
    Semantics sem(t);
    bool refutes = sem.value_all(s.left).contains(m.index()) && !sem.value_any(s.right).contains(m.index());
    if (!refutes) throw Disagreement("countermodel " + m.to_string() + " does not refute the sequent");
    res["verdict"] = "NOT PROVABLE";
    res["countermodel"] = m.to_string();
    out += "NOT PROVABLE  " + to_string(s) + "\ncountermodel " + m.to_string() + "\n";
  }
  r.print(std::cout);
  return 0;
}

void report_histories(Report& r, const ActionDomain& d, const Options& o) {
  auto hs = parsing("domain", [&] { return solve_histories(d, o.max_atoms); });
  Json list = Json::array();
  std::string& out = r.text();
  out += std::to_string(hs.size()) + (hs.size() == 1 ? " history\n" : " histories\n");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    out += "\nhistory " + std::to_string(i + 1) + "\n" + render_history(hs[i]);
    Json h;
    for (const auto& f : d.fluents) {
      Json row = Json::array();
      for (std::size_t k = 0; k <= d.horizon; ++k) row.push_back(hs[i].fluent(f, k));
      h["fluents"][f] = row;
    }
    for (const auto& a : d.actions) {
      Json row = Json::array();
      for (std::size_t k = 0; k < d.horizon; ++k) row.push_back(hs[i].occurs(a, k));
      h["actions"][a] = row;
    }
    list.push_back(h);
  }
  r.results()["count"] = hs.size();
  r.results()["histories"] = list;
}

int cmd_solve(const std::string& path, const Options& o) {
  Input in = read_input(path);
  ActionDomain d = parsing(in.path, [&] {
    auto dom = parse_domain(in.text);
    validate(dom);
    return dom;
  });
  Report r("solve", o);
  r.input(in);
  report_histories(r, d, o);
  r.print(std::cout);
  return 0;
}

constexpr const char* kYaleShooting =
    "fluents: alive loaded\n"
    "actions: wait shoot\n"
    "action shoot: pre loaded post !alive & !loaded\n"
    "occurs: wait@0 shoot@1\n"
    "init: alive loaded\n"
    "horizon: 2\n";

int cmd_demo_ysp(const Options& o) {
  Report r("demo-ysp", o);
  ActionDomain d = parse_domain(kYaleShooting);
  r.text() += "# built-in Yale shooting domain\n";
  report_histories(r, d, o);
  r.print(std::cout);
  return 0;
}

int cmd_pj(const std::string& path, const std::string& goal_text, const std::string& grounds_text,
           const Options& o) {
  Input in = read_input(path);
  Basics basics = parsing(in.path, [&] { return parse_basics(in.text); });
  Formula goal = parsing("goal", [&] { return parse_formula(goal_text); });
  auto grounds = parsing("grounds", [&] { return parse_formula_list(grounds_text); });
  Report r("pj", o);
  r.input(in);
  r.argument("goal", goal_text);
  r.argument("grounds", grounds_text);
  PJSequent seq(basics, Argument(goal, grounds));
  auto tr = parsing("translation", [&] {
    auto x = modal_translation(seq);
    check_capacity(x.theory.universe().size(), o.max_atoms);
    return x;
  });
  const bool valid = modal_entails_semantic(tr.sequent.left, tr.sequent.right, tr.theory);
  Json& res = r.results();
  std::string& out = r.text();
  Json rules = Json::array();
  out += "translation\n";
  for (const auto& rule : tr.theory.rules()) {
    rules.push_back(to_string(rule));
    out += "  " + to_string(rule) + "\n";
  }
  out += "  " + to_string(tr.sequent) + "\n";
  res["translation"] = {{"rules", rules}, {"sequent", to_string(tr.sequent)}};
  res["valid"] = valid;
  out += std::string("modal translation ") + (valid ? "valid" : "not valid") + "\n";

  auto ex = extract_pj_proof(grounds, goal, basics);
  if (ex.status == ExtractionStatus::Extracted) {
    if (!valid) throw Disagreement("extracted an argument for an invalid translation");
    if (auto c = check_pj_proof(ex.proof); !c) throw Disagreement("extracted proof rejected: " + c.reason);
    std::string text = render_pj_proof(ex.proof);
    res["argument"] = "DERIVABLE";
    res["proof_size"] = pj_size(ex.proof);
    res["proof"] = text;
    out += "DERIVABLE  " + to_string(seq.goal) + "\n" + text;
  } else {
    if (ex.status == ExtractionStatus::Unprovable && valid) throw Disagreement("valid translation but no proof found");
    res["argument"] = ex.status == ExtractionStatus::Unprovable ? "NOT DERIVABLE" : "NO ARGUMENT";
    res["reason"] = ex.message;
    out += res["argument"].get<std::string>() + "  " + to_string(seq.goal) + "\n" + ex.message + "\n";
  }
  r.print(std::cout);
  return 0;
}

std::string model_list(const std::vector<Model>& ms) {
  std::string out;
  for (const auto& m : ms) out += (out.empty() ? "" : "; ") + m.to_string();
  return out.empty() ? "none" : out;
}

int cmd_turner(const std::string& path, const std::string& query, bool witness, const Options& o) {
  Input in = read_input(path);
  S5Theory t = parsing(in.path, [&] { return parse_s5_theory(in.text); });
  Report r("turner", o);
  r.input(in);
  auto models = parsing(in.path, [&] { return turner_explained_models(t.axioms, t.universe); });
  Json& res = r.results();
  std::string& out = r.text();
  Json list = Json::array();
  for (const auto& m : models) list.push_back(m.to_string());
  res["explained"] = list;
  out += "explained models: " + model_list(models) + "\n";
  if (!query.empty()) {
    r.argument("query", query);
    Formula q = parsing("query", [&] { return parse_formula(query, t.universe); });
    auto c = turner_consequence(t.axioms, q, t.universe);
    res["query"] = to_string(q);
    res["explained_by_theory"] = c.holds && !c.vacuous;
    res["vacuous"] = c.vacuous;
    out += to_string(q) + (c.holds && !c.vacuous ? " is" : " is not") + " causally explained" +
           (c.vacuous ? " (no explained models)" : "") + "\n";
  }
  if (witness) {
    auto w = nonmonotonicity_witness();
    auto show = [](const std::vector<Formula>& fs) {
      std::string s;
      for (const auto& f : fs) s += (s.empty() ? "" : ", ") + to_string(f, kS5Style);
      return "{" + s + "}";
    };
    res["witness"] = {{"t1", show(w.t1)},
                      {"t2", show(w.t2)},
                      {"t1_explains_p", w.t1_explains_p},
                      {"t2_explains_p", w.t2_explains_p},
                      {"t2_models", w.t2_models.size()},
                      {"box1_p_is_p", w.box1_p_is_p},
                      {"box1_not_p_is_empty", w.box1_not_p_is_empty},
                      {"box2_not_p_is_not_p", w.box2_not_p_is_not_p},
                      {"gamma1_is_top_and_p", w.gamma1_is_top_and_p},
                      {"gamma2_is_top", w.gamma2_is_top}};
    out += "witness: T1 = " + show(w.t1) + " explains p: " + (w.t1_explains_p ? "yes" : "no") + "\n";
    out += "         T2 = " + show(w.t2) + " explains p: " + (w.t2_explains_p ? "yes" : "no") + ", " +
           std::to_string(w.t2_models.size()) + " explained models\n";
    out += std::string("         causal side: [1]p = p ") + (w.box1_p_is_p ? "holds" : "fails") + ", [1]!p = false " +
           (w.box1_not_p_is_empty ? "holds" : "fails") + ", [2]!p = !p " + (w.box2_not_p_is_not_p ? "holds" : "fails") +
           "\n";
    out += std::string("         {[i]p <-> p, [i]!p <-> !p}: i=1 is {true, p} ") +
           (w.gamma1_is_top_and_p ? "yes" : "no") + ", i=2 is {true} " + (w.gamma2_is_top ? "yes" : "no") + "\n";
  }
  r.print(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causal: causal theories, their modal logic and friends"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_flag("--timing", o.timing, "append elapsed time");
  app.add_option("--max-atoms", o.max_atoms, "refuse universes larger than this")->check(CLI::Range(0, 30));
  app.add_option("--proof-out", o.proof_out, "write the proof here instead of stdout");

  std::string file, sequent, goal, grounds, query;
  bool witness = false;
  auto* models = app.add_subcommand("models", "list models and whether each is causally explained");
  models->add_option("theory", file)->required();
  auto* entail = app.add_subcommand("entail", "decide a sequent semantically and by proof search");
  entail->add_option("theory", file)->required();
  entail->add_option("sequent", sequent)->required();
  auto* solve = app.add_subcommand("solve", "causally explained histories of an action domain");
  solve->add_option("domain", file)->required();
  auto* pj = app.add_subcommand("pj", "argument derivation from basic arguments");
  pj->add_option("basics", file)->required();
  pj->add_option("--goal", goal, "conclusion of the argument")->required();
  pj->add_option("--grounds", grounds, "comma-separated grounds");
  auto* turner = app.add_subcommand("turner", "causally explained models of an S5 theory");
  turner->add_option("theory", file)->required();
  turner->add_option("--query", query, "nonmodal formula to test");
  turner->add_flag("--witness", witness, "also report the nonmonotonicity witness");
  auto* ysp = app.add_subcommand("demo-ysp", "solve the built-in Yale shooting domain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    if (*models) return cmd_models(file, o);
    if (*entail) return cmd_entail(file, sequent, o);
    if (*solve) return cmd_solve(file, o);
    if (*pj) return cmd_pj(file, goal, grounds, o);
    if (*turner) return cmd_turner(file, query, witness, o);
    if (*ysp) return cmd_demo_ysp(o);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Disagreement& e) {
    std::cerr << "internal inconsistency: " << e.what() << '\n';
    return 3;
  } catch (const GaveUp& e) {
    std::cerr << "gave up: " << e.what() << '\n';
    return 4;
  }
  return 1;
}
