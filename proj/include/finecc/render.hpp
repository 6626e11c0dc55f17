#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "finecc/scenario.hpp"

namespace finecc {

using ojson = nlohmann::ordered_json;

namespace render {

inline std::string brace_list(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out + "}";
}

inline ojson vector_json(const AccessVector& v) {
  ojson out = ojson::object();
  for (const auto& f : v.fields()) out[f] = std::string(to_string(v.at(f)));
  return out;
}

// --- analyze ----------------------------------------------------------------

struct MethodAnalysis {
  std::string method;
  std::string defined_in;
  MethodFacts facts;
  AccessVector tav;
};

struct ClassAnalysis {
  std::string cls;
  std::vector<std::string> fields;
  std::vector<MethodAnalysis> methods;
};

inline std::vector<ClassAnalysis> analyze(const ClassModel& model,
                                          const std::vector<std::string>& classes) {
  FactsCache facts(model);
  std::vector<ClassAnalysis> out;
  for (const auto& c : classes) {
    ClassTavs tavs = compute_tavs(facts, c);
    ClassAnalysis ca{c, model.fields(c), {}};
    for (std::size_t k = 0; k < tavs.methods.size(); ++k) {
      const auto& m = tavs.methods[k];
      ca.methods.push_back(
          {m, *model.defining_class(c, m), facts.get(c, m), tavs.tavs[k]});
    }
    out.push_back(std::move(ca));
  }
  return out;
}

inline std::string analyze_text(const std::vector<ClassAnalysis>& classes) {
  std::string out;
  for (const auto& c : classes) {
    out += "class " + c.cls + "\n";
    out += "  fields " + brace_list(c.fields) + "\n";
    for (const auto& m : c.methods) {
      out += "  method " + m.method;
      if (m.defined_in != c.cls) out += " (inherited from " + m.defined_in + ")";
      out += "\n";
      out += "    DAV " + to_string(m.facts.dav) + "\n";
      std::vector<std::string> dsc(m.facts.dsc.begin(), m.facts.dsc.end());
      std::vector<std::string> psc;
      for (const auto& p : m.facts.psc) psc.push_back("(" + p.cls + ", " + p.method + ")");
      out += "    DSC " + brace_list(dsc) + "\n";
      out += "    PSC " + brace_list(psc) + "\n";
      out += "    TAV " + to_string(m.tav) + "\n";
    }
  }
  return out;
}

inline ojson analyze_json(const std::vector<ClassAnalysis>& classes) {
  ojson arr = ojson::array();
  for (const auto& c : classes) {
    ojson jc;
    jc["class"] = c.cls;
    jc["fields"] = c.fields;
    jc["methods"] = ojson::array();
    for (const auto& m : c.methods) {
      ojson jm;
      jm["method"] = m.method;
      jm["defined_in"] = m.defined_in;
      jm["dav"] = vector_json(m.facts.dav);
      jm["dsc"] = std::vector<std::string>(m.facts.dsc.begin(), m.facts.dsc.end());
      jm["psc"] = ojson::array();
      for (const auto& p : m.facts.psc) jm["psc"].push_back({p.cls, p.method});
      jm["tav"] = vector_json(m.tav);
      jc["methods"].push_back(std::move(jm));
    }
    arr.push_back(std::move(jc));
  }
  return ojson{{"classes", std::move(arr)}};
}

// --- graph ------------------------------------------------------------------

struct GraphReport {
  LbrGraph graph;
  Condensation condensation;
  std::vector<AccessVector> tavs;  // per vertex
};

inline GraphReport graph_report(const ClassModel& model, const std::string& c) {
  FactsCache facts(model);
  GraphReport r{build_lbr_graph(facts, c), {}, {}};
  r.condensation = condense(r.graph);
  r.tavs = vertex_tavs(facts, r.graph, r.condensation);
  return r;
}

inline std::string graph_dot(const GraphReport& r) {
  std::string out = "digraph \"" + r.graph.root_class + "\" {\n";
  for (const auto& v : r.graph.vertices) out += "  \"" + to_string(v) + "\";\n";
  for (const auto& [a, b] : r.graph.edges()) {
    out += "  \"" + to_string(a) + "\" -> \"" + to_string(b) + "\";\n";
  }
  return out + "}\n";
}

inline std::string graph_text(const GraphReport& r) {
  const auto& g = r.graph;
  std::string out = "graph " + g.root_class + "\n";
  out += "vertices " + std::to_string(g.vertices.size()) + "\n";
  for (const auto& v : g.vertices) out += "  " + to_string(v) + "\n";
  out += "edges " + std::to_string(g.edge_count()) + "\n";
  for (const auto& [a, b] : g.edges()) out += "  " + to_string(a) + " -> " + to_string(b) + "\n";
  out += "components " + std::to_string(r.condensation.size()) + " (sinks first)\n";
  for (std::size_t c = 0; c < r.condensation.size(); ++c) {
    std::vector<std::string> members;
    for (std::size_t v : r.condensation.components[c]) members.push_back(to_string(g.vertices[v]));
    out += "  " + brace_list(members) + (r.condensation.cyclic[c] ? " cyclic" : "") + "\n";
  }
  out += "TAV\n";
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    out += "  " + to_string(g.vertices[v]) + " " + to_string(r.tavs[v]) + "\n";
  }
  return out;
}

inline ojson graph_json(const GraphReport& r) {
  const auto& g = r.graph;
  ojson out;
  out["class"] = g.root_class;
  out["vertices"] = ojson::array();
  for (const auto& v : g.vertices) out["vertices"].push_back({v.cls, v.method});
  out["edges"] = ojson::array();
  for (const auto& [a, b] : g.edges()) {
    out["edges"].push_back({{"from", {a.cls, a.method}}, {"to", {b.cls, b.method}}});
  }
  out["components"] = ojson::array();
  for (std::size_t c = 0; c < r.condensation.size(); ++c) {
    ojson members = ojson::array();
    for (std::size_t v : r.condensation.components[c]) {
      members.push_back({g.vertices[v].cls, g.vertices[v].method});
    }
    out["components"].push_back(std::move(members));
  }
  out["tav"] = ojson::array();
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    out["tav"].push_back({{"vertex", {g.vertices[v].cls, g.vertices[v].method}},
                          {"vector", vector_json(r.tavs[v])}});
  }
  return out;
}

// --- table ------------------------------------------------------------------

inline std::string table_text(const CommutativityTable& t) {
  std::size_t width = 3;
  for (const auto& m : t.methods()) width = std::max(width, m.size());
  width += 2;
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
  std::string out = "class " + t.cls() + "\n" + pad("");
  for (const auto& m : t.methods()) out += pad(m);
  out += "\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += pad(t.methods()[i]);
    for (std::size_t j = 0; j < t.size(); ++j) out += pad(t.commutes(i, j) ? "yes" : "no");
    out += "\n";
  }
  // Trailing padding is noise in golden files.
  std::string trimmed;
  std::size_t start = 0;
  while (start < out.size()) {
    std::size_t nl = out.find('\n', start);
    std::string line = out.substr(start, nl - start);
    line.erase(line.find_last_not_of(' ') + 1);
    trimmed += line + "\n";
    start = nl + 1;
  }
  return trimmed;
}

inline ojson table_json(const CommutativityTable& t) {
  ojson out;
  out["class"] = t.cls();
  out["methods"] = t.methods();
  out["commutes"] = ojson::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < t.size(); ++j) row.push_back(t.commutes(i, j));
    out["commutes"].push_back(std::move(row));
  }
  return out;
}

// --- simulate ---------------------------------------------------------------

inline std::string witness_text(const ConflictWitness& w) {
  return to_string(w.first.resource) + ", modes (" + w.first.mode + ", " + w.second.mode +
         "): " + mode_string(w.first) + " vs " + mode_string(w.second);
}

inline std::vector<std::string> set_names(const ConcurrencyReport& r,
                                          const std::vector<std::size_t>& set) {
  std::vector<std::string> out;
  for (std::size_t i : set) out.push_back(r.txns[i]);
  return out;
}

inline std::string simulate_text(const ConcurrencyReport& r, bool trace) {
  std::string out = "transactions";
  for (const auto& t : r.txns) out += " " + t;
  out += "\nconflicts " + std::to_string(r.witnesses.size()) + "\n";
  for (const auto& [pair, w] : r.witnesses) {
    out += "  " + r.txns[pair.first] + " / " + r.txns[pair.second] + ": " + witness_text(w) + "\n";
  }
  out += "maximal compatible sets " + std::to_string(r.maximal_sets.size()) + "\n";
  for (const auto& s : r.maximal_sets) out += "  " + brace_list(set_names(r, s)) + "\n";
  if (trace) {
    out += "trace\n";
    for (const auto& e : r.replay.trace) {
      out += "  " + std::to_string(e.seq) + " " + e.txn + " " + e.action + ": " + e.outcome;
      if (!e.blockers.empty()) out += " by " + brace_list(e.blockers);
      out += "\n";
    }
    for (const auto& d : r.replay.deadlocks) out += "  deadlock " + brace_list(d) + "\n";
  }
  return out;
}

inline ojson simulate_json(const ConcurrencyReport& r, bool trace) {
  ojson out;
  out["transactions"] = r.txns;
  out["conflicts"] = ojson::array();
  for (const auto& [pair, w] : r.witnesses) {
    out["conflicts"].push_back({{"a", r.txns[pair.first]},
                                {"b", r.txns[pair.second]},
                                {"resource", to_string(w.first.resource)},
                                {"modes", {w.first.mode, w.second.mode}},
                                {"locks", {mode_string(w.first), mode_string(w.second)}}});
  }
  out["matrix"] = r.conflict;
  out["maximal_sets"] = ojson::array();
  for (const auto& s : r.maximal_sets) out["maximal_sets"].push_back(set_names(r, s));
  if (trace) {
    out["trace"] = ojson::array();
    for (const auto& e : r.replay.trace) {
      out["trace"].push_back({{"seq", e.seq},
                              {"txn", e.txn},
                              {"action", e.action},
                              {"outcome", e.outcome},
                              {"blockers", e.blockers}});
    }
    out["deadlocks"] = r.replay.deadlocks;
  }
  return out;
}

// One JSON object per line.
inline std::string events_jsonl(const std::vector<LockEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    ojson j{{"seq", e.seq},       {"txn", e.txn},   {"action", e.action},
            {"resource", e.resource}, {"mode", e.mode}, {"outcome", e.outcome}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace render
}  // namespace finecc
