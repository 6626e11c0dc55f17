#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace finecc {

// Strongly connected components of a graph over vertices [0, n).
//
// `components` is in reverse topological order of the condensation: every
// edge between components goes from a later component to an earlier one, so
// iterating front to back visits sinks before the sources that reach them.
struct Condensation {
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> component_of;
  // Successor components of each component, sorted, without self-loops.
  std::vector<std::vector<std::size_t>> dag;
  // Components whose members have an edge inside the component (a cycle,
  // including a vertex with a self-loop).
  std::vector<bool> cyclic;

  std::size_t size() const noexcept { return components.size(); }
};

// Tarjan's algorithm with an explicit stack, so deep call chains do not
// exhaust the native stack. `adjacency[v]` lists the successors of v.
template <class Adjacency>
Condensation strong_components(const Adjacency& adjacency) {
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  const std::size_t n = adjacency.size();

  Condensation out;
  out.component_of.assign(n, kUnvisited);

  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  std::vector<Frame> call;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      Frame& f = call.back();
      const auto& succ = adjacency[f.v];
      if (f.next < succ.size()) {
        std::size_t w = succ[f.next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) {
        std::size_t parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component_of[w] = out.components.size();
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.components.push_back(std::move(comp));
      }
    }
  }

  out.dag.resize(out.components.size());
  out.cyclic.assign(out.components.size(), false);
  for (std::size_t c = 0; c < out.components.size(); ++c) {
    if (out.components[c].size() > 1) out.cyclic[c] = true;
    for (std::size_t v : out.components[c]) {
      for (std::size_t w : adjacency[v]) {
        std::size_t d = out.component_of[w];
        if (d == c) {
          out.cyclic[c] = true;
        } else {
          out.dag[c].push_back(d);
        }
      }
    }
    auto& edges = out.dag[c];
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  return out;
}

}  // namespace finecc
