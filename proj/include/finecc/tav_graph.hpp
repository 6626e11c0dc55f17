#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finecc/extraction.hpp"
#include "finecc/scc.hpp"

namespace finecc {

// Late binding resolution graph of one class.
//
// Vertices are {C} x METHODS(C) plus everything reachable through prefixed
// self-calls. A plain self-call from any vertex is bound to the root class
// C, since that is the class of the receiver; a prefixed call goes to the
// named (ancestor, method) pair.
struct LbrGraph {
  std::string root_class;
  std::vector<MethodRef> vertices;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted successor ids

  std::size_t vertex_id(const MethodRef& v) const {
    auto it = ids_.find(v);
    if (it == ids_.end()) {
      throw Error(ErrorKind::UnknownMethod,
                  "'" + to_string(v) + "' is not a vertex of the graph of '" +
                      root_class + "'");
    }
    return it->second;
  }

  bool has_vertex(const MethodRef& v) const { return ids_.count(v) != 0; }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& a : adjacency) n += a.size();
    return n;
  }

  std::vector<std::pair<MethodRef, MethodRef>> edges() const {
    std::vector<std::pair<MethodRef, MethodRef>> out;
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      for (std::size_t w : adjacency[v]) out.emplace_back(vertices[v], vertices[w]);
    }
    return out;
  }

  std::size_t add_vertex(MethodRef v) {
    auto [it, inserted] = ids_.emplace(v, vertices.size());
    if (inserted) {
      vertices.push_back(std::move(v));
      adjacency.emplace_back();
    }
    return it->second;
  }

 private:
  std::unordered_map<MethodRef, std::size_t, MethodRefHash> ids_;
};

inline LbrGraph build_lbr_graph(FactsCache& facts, const std::string& c) {
  const ClassModel& model = facts.model();
  LbrGraph g;
  g.root_class = c;
  std::deque<std::size_t> work;
  for (const auto& b : model.methods(c)) work.push_back(g.add_vertex({c, b.name}));

  // Closure over prefixed calls; terminates because each step moves strictly
  // up a finite acyclic hierarchy or revisits a known vertex.
  std::vector<bool> expanded;
  while (!work.empty()) {
    std::size_t v = work.front();
    work.pop_front();
    if (v < expanded.size() && expanded[v]) continue;
    if (expanded.size() <= v) expanded.resize(v + 1, false);
    expanded[v] = true;

    MethodRef here = g.vertices[v];
    const MethodFacts& f = facts.get(here.cls, here.method);
    std::vector<std::size_t> succ;
    for (const auto& m : f.dsc) succ.push_back(g.add_vertex({c, m}));
    for (const auto& p : f.psc) {
      std::size_t w = g.add_vertex(p);
      succ.push_back(w);
      if (w >= expanded.size() || !expanded[w]) work.push_back(w);
    }
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    g.adjacency[v] = std::move(succ);
  }
  return g;
}

inline LbrGraph build_lbr_graph(const ClassModel& model, const std::string& c) {
  FactsCache facts(model);
  return build_lbr_graph(facts, c);
}

inline Condensation condense(const LbrGraph& g) { return strong_components(g.adjacency); }

// Transitive access vector of every vertex of `g`, in vertex order. One pass
// over the condensation from sinks to sources; the members of a component
// share a single vector.
//
// Joins run on dense rows indexed by field ordinal, coded 0 for a field
// outside the index set and 1 + mode otherwise. Union of index sets plus max
// of modes is then an elementwise max.
inline std::vector<AccessVector> vertex_tavs(FactsCache& facts, const LbrGraph& g,
                                             const Condensation& cond) {
  const AccessVector& blank = facts.blank(g.root_class);
  const std::size_t root_width = blank.size();
  std::vector<std::string> names = blank.fields();
  std::unordered_map<std::string, std::uint32_t> ordinal;
  for (std::uint32_t k = 0; k < names.size(); ++k) ordinal.emplace(names[k], k);
  std::vector<const AccessVector*> davs;
  davs.reserve(g.vertices.size());
  for (const auto& v : g.vertices) {
    davs.push_back(&facts.get(v.cls, v.method).dav);
    for (const auto& f : davs.back()->fields()) {
      if (ordinal.emplace(f, static_cast<std::uint32_t>(names.size())).second) {
        names.push_back(f);
      }
    }
  }

  const std::size_t width = names.size();
  std::vector<std::uint8_t> rows(cond.size() * width, 0);
  for (std::size_t c = 0; c < cond.size(); ++c) {
    std::uint8_t* row = rows.data() + c * width;
    for (std::size_t v : cond.components[c]) {
      for (const auto& f : davs[v]->fields()) {
        auto code = static_cast<std::uint8_t>(1 + static_cast<int>(davs[v]->at(f)));
        std::uint8_t& cell = row[ordinal.at(f)];
        cell = std::max(cell, code);
      }
    }
    for (std::size_t d : cond.dag[c]) {
      const std::uint8_t* below = rows.data() + d * width;
      for (std::size_t k = 0; k < width; ++k) row[k] = std::max(row[k], below[k]);
    }
  }

  // A component indexed by exactly the root fields starts from the root
  // blank and shares its index.
  std::vector<AccessVector> per_component(cond.size());
  for (std::size_t c = 0; c < cond.size(); ++c) {
    const std::uint8_t* row = rows.data() + c * width;
    bool root_only = std::all_of(row, row + root_width, [](std::uint8_t x) { return x != 0; }) &&
                     std::all_of(row + root_width, row + width, [](std::uint8_t x) { return x == 0; });
    AccessVector& v = per_component[c];
    if (root_only) v = blank;
    for (std::size_t k = 0; k < width; ++k) {
      if (row[k] > 1 || (row[k] == 1 && !root_only)) {
        v.set(names[k], static_cast<Mode>(row[k] - 1));
      }
    }
  }
  std::vector<AccessVector> out;
  out.reserve(g.vertices.size());
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    std::size_t c = cond.component_of[v];
    if (cond.components[c].size() == 1) {
      out.push_back(std::move(per_component[c]));
    } else {
      out.push_back(per_component[c]);
    }
  }
  return out;
}

// TAVs of the methods of one class, in METHODS(C) order.
struct ClassTavs {
  std::string cls;
  std::vector<std::string> methods;
  std::vector<AccessVector> tavs;

  const AccessVector& at(std::string_view m) const {
    for (std::size_t i = 0; i < methods.size(); ++i) {
      if (methods[i] == m) return tavs[i];
    }
    throw Error(ErrorKind::UnknownMethod,
                "'" + std::string(m) + "' is not a method of '" + cls + "'");
  }
};

inline ClassTavs compute_tavs(FactsCache& facts, const std::string& c) {
  LbrGraph g = build_lbr_graph(facts, c);
  Condensation cond = condense(g);
  std::vector<AccessVector> all = vertex_tavs(facts, g, cond);
  // The methods of `c` were added first, in METHODS(c) order.
  const auto& methods = facts.model().methods(c);
  ClassTavs out{c, {}, {}};
  out.methods.reserve(methods.size());
  out.tavs.reserve(methods.size());
  for (std::size_t k = 0; k < methods.size(); ++k) {
    out.methods.push_back(methods[k].name);
    out.tavs.push_back(std::move(all[k]));
  }
  return out;
}

inline ClassTavs compute_tavs(const ClassModel& model, const std::string& c) {
  FactsCache facts(model);
  return compute_tavs(facts, c);
}

}  // namespace finecc
