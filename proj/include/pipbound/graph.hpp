#pragma once

// Tarjan's strongly connected components over a dense adjacency list.
// Components are returned in topological order of the condensation.

#include <algorithm>
#include <functional>
#include <vector>

namespace pipbound {

struct SccResult {
  std::vector<std::vector<int>> components;  // topological order
  std::vector<int> component_of;             // node -> component index
};

inline SccResult tarjan_scc(const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  SccResult res;
  res.component_of.assign(n, -1);
  int counter = 0;

  // Iterative DFS to keep stack depth independent of graph size.
  struct Frame {
    int v;
    size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.edge < adj[f.v].size()) {
        int w = adj[f.v][f.edge++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          for (int w : comp) res.component_of[w] = static_cast<int>(res.components.size());
          res.components.push_back(std::move(comp));
        }
      }
    }
  }
  // Tarjan emits components in reverse topological order.
  std::reverse(res.components.begin(), res.components.end());
  int m = static_cast<int>(res.components.size());
  for (auto& c : res.component_of) c = m - 1 - c;
  return res;
}

// A component is trivial when it is a single node without a self-edge.
inline bool scc_is_trivial(const std::vector<std::vector<int>>& adj, const std::vector<int>& comp) {
  if (comp.size() != 1) return false;
  int v = comp[0];
  return std::find(adj[v].begin(), adj[v].end(), v) == adj[v].end();
}

}  // namespace pipbound
