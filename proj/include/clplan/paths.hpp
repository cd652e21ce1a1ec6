#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "clplan/topology.hpp"

namespace clplan {

struct Path {
  std::vector<int> node_ids;  // source first
  std::vector<int> link_ids;  // node_ids.size() - 1 entries
  double length_km = 0.0;

  bool operator==(const Path&) const = default;
};

namespace detail {

// Dijkstra that breaks length ties by lexicographic node sequence, so the
// returned shortest path is unique. Edges/nodes can be masked out for Yen's
// spur searches. Graphs here are small; the O(V^2) label scan is fine.
inline std::optional<Path> dijkstra_lex(const Topology& topo, int src, int dst,
                                        const std::vector<char>& node_banned,
                                        const std::vector<char>& link_banned) {
  const int n = topo.node_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(n), kInf);
  std::vector<std::vector<int>> seq(static_cast<std::size_t>(n));
  std::vector<char> done(static_cast<std::size_t>(n), 0);

  dist[static_cast<std::size_t>(src)] = 0.0;
  seq[static_cast<std::size_t>(src)] = {src};

  auto better = [&](int u, int v) {
    if (dist[static_cast<std::size_t>(u)] != dist[static_cast<std::size_t>(v)]) {
      return dist[static_cast<std::size_t>(u)] < dist[static_cast<std::size_t>(v)];
    }
    return seq[static_cast<std::size_t>(u)] < seq[static_cast<std::size_t>(v)];
  };

  for (int iter = 0; iter < n; ++iter) {
    int u = -1;
    for (int v = 0; v < n; ++v) {
      if (done[static_cast<std::size_t>(v)] || dist[static_cast<std::size_t>(v)] == kInf) continue;
      if (u == -1 || better(v, u)) u = v;
    }
    if (u == -1) break;
    done[static_cast<std::size_t>(u)] = 1;
    if (u == dst) break;
    for (const auto& [v, lid] : topo.neighbors(u)) {
      if (done[static_cast<std::size_t>(v)]) continue;
      if (node_banned[static_cast<std::size_t>(v)] || link_banned[static_cast<std::size_t>(lid)]) {
        continue;
      }
      const double nd = dist[static_cast<std::size_t>(u)] + topo.link(lid).length_km;
      auto cand_seq = seq[static_cast<std::size_t>(u)];
      cand_seq.push_back(v);
      const auto& cur = dist[static_cast<std::size_t>(v)];
      if (nd < cur - 1e-12 ||
          (std::abs(nd - cur) <= 1e-12 && cand_seq < seq[static_cast<std::size_t>(v)])) {
        dist[static_cast<std::size_t>(v)] = nd;
        seq[static_cast<std::size_t>(v)] = std::move(cand_seq);
      }
    }
  }
  if (dist[static_cast<std::size_t>(dst)] == kInf) return std::nullopt;

  Path p;
  p.node_ids = seq[static_cast<std::size_t>(dst)];
  p.length_km = dist[static_cast<std::size_t>(dst)];
  for (std::size_t i = 0; i + 1 < p.node_ids.size(); ++i) {
    p.link_ids.push_back(topo.find_link(p.node_ids[i], p.node_ids[i + 1]));
  }
  return p;
}

struct PathOrder {
  bool operator()(const Path& x, const Path& y) const {
    if (std::abs(x.length_km - y.length_km) > 1e-12) return x.length_km < y.length_km;
    return x.node_ids < y.node_ids;
  }
};

}  // namespace detail

inline double shortest_path_km(const Topology& topo, int src, int dst) {
  std::vector<char> no_nodes(static_cast<std::size_t>(topo.node_count()), 0);
  std::vector<char> no_links(static_cast<std::size_t>(topo.link_count()), 0);
  auto p = detail::dijkstra_lex(topo, src, dst, no_nodes, no_links);
  if (!p) {
    throw ValidationError("no path between '" + topo.node(src).name + "' and '" +
                          topo.node(dst).name + "'");
  }
  return p->length_km;
}

// Yen's algorithm for up to k loopless shortest paths, ordered by length and
// then lexicographic node sequence. Returns fewer than k if fewer exist.
inline std::vector<Path> k_shortest_paths(const Topology& topo, int src, int dst, int k = 3) {
  if (src == dst) throw ValidationError("k_shortest_paths: source equals destination");
  std::vector<Path> result;
  std::vector<char> no_nodes(static_cast<std::size_t>(topo.node_count()), 0);
  std::vector<char> no_links(static_cast<std::size_t>(topo.link_count()), 0);

  auto first = detail::dijkstra_lex(topo, src, dst, no_nodes, no_links);
  if (!first) return result;
  result.push_back(*first);

  std::set<Path, detail::PathOrder> candidates;
  while (static_cast<int>(result.size()) < k) {
    const Path& prev = result.back();
    for (std::size_t spur_idx = 0; spur_idx + 1 < prev.node_ids.size(); ++spur_idx) {
      const int spur_node = prev.node_ids[spur_idx];
      std::vector<int> root_nodes(prev.node_ids.begin(),
                                  prev.node_ids.begin() + static_cast<std::ptrdiff_t>(spur_idx) + 1);

      std::vector<char> node_banned(static_cast<std::size_t>(topo.node_count()), 0);
      std::vector<char> link_banned(static_cast<std::size_t>(topo.link_count()), 0);
      for (const Path& known : result) {
        if (known.node_ids.size() > spur_idx &&
            std::equal(root_nodes.begin(), root_nodes.end(), known.node_ids.begin())) {
          if (spur_idx < known.link_ids.size()) {
            link_banned[static_cast<std::size_t>(known.link_ids[spur_idx])] = 1;
          }
        }
      }
      for (std::size_t i = 0; i < spur_idx; ++i) {
        node_banned[static_cast<std::size_t>(root_nodes[i])] = 1;
      }

      auto spur = detail::dijkstra_lex(topo, spur_node, dst, node_banned, link_banned);
      if (!spur) continue;

      Path total;
      total.node_ids = root_nodes;
      total.node_ids.insert(total.node_ids.end(), spur->node_ids.begin() + 1,
                            spur->node_ids.end());
      total.link_ids.assign(prev.link_ids.begin(),
                            prev.link_ids.begin() + static_cast<std::ptrdiff_t>(spur_idx));
      total.link_ids.insert(total.link_ids.end(), spur->link_ids.begin(), spur->link_ids.end());
      total.length_km = 0.0;
      for (int lid : total.link_ids) total.length_km += topo.link(lid).length_km;

      if (std::find(result.begin(), result.end(), total) == result.end()) {
        candidates.insert(std::move(total));
      }
    }
    if (candidates.empty()) break;
    result.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return result;
}

}  // namespace clplan
