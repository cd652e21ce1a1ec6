#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "clplan/errors.hpp"
#include "clplan/units.hpp"

namespace clplan {

enum class Band : int { c = 0, l = 1 };

inline constexpr std::array<Band, 2> kBands{Band::c, Band::l};
inline constexpr int band_index(Band b) { return static_cast<int>(b); }
inline const char* band_name(Band b) { return b == Band::c ? "C" : "L"; }

// Physical constants attached to every span at construction time.
struct SpanParams {
  double span_km = 80.0;
  std::array<double, 2> attenuation_db_per_km{0.20, 0.22};  // [C, L]
  std::array<double, 2> noise_figure_db{5.0, 6.0};          // [C, L]
};

struct Span {
  double length_km = 0.0;
  std::array<double, 2> attenuation_db_per_km{0.20, 0.22};
  std::array<double, 2> noise_figure_db{5.0, 6.0};

  // Amplifier gain exactly compensates the span loss in each band.
  double gain_db(Band b) const { return length_km * attenuation_db_per_km[band_index(b)]; }
};

// Splits a link into ceil(length / span_km) equal-length spans. Equal spans keep
// the amplifier count at ceil(length / span_km) and avoid a short remainder span.
inline std::vector<Span> build_spans(double link_length_km, const SpanParams& p = {}) {
  if (!(link_length_km > 0.0)) {
    throw ValidationError("build_spans: link length must be positive, got " +
                          std::to_string(link_length_km));
  }
  const int n = static_cast<int>(std::ceil(link_length_km / p.span_km - 1e-12));
  std::vector<Span> spans(static_cast<std::size_t>(std::max(n, 1)));
  for (auto& s : spans) {
    s.length_km = link_length_km / static_cast<double>(spans.size());
    s.attenuation_db_per_km = p.attenuation_db_per_km;
    s.noise_figure_db = p.noise_figure_db;
  }
  return spans;
}

struct Node {
  std::string name;
  double lon = 0.0;
  double lat = 0.0;
};

struct Link {
  int a = -1;  // node indices, a < b
  int b = -1;
  double length_km = 0.0;
  std::vector<Span> spans;
};

// Great-circle distance (haversine), rounded to 0.1 km for determinism.
inline double great_circle_km(double lon1, double lat1, double lon2, double lat2) {
  constexpr double kEarthRadiusKm = 6371.0;
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlam = (lon2 - lon1) * kDegToRad;
  const double s = std::sin(dphi / 2.0);
  const double t = std::sin(dlam / 2.0);
  const double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
  const double d = 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
  return std::round(d * 10.0) / 10.0;
}

// Undirected physical topology. Nodes and links are kept in lexicographic
// order so that every traversal in the planner is deterministic.
class Topology {
 public:
  Topology() = default;
  Topology(std::vector<Node> nodes, std::vector<std::array<std::string, 2>> link_ends,
           std::vector<double> lengths_km, const SpanParams& span_params = {}) {
    std::sort(nodes.begin(), nodes.end(),
              [](const Node& x, const Node& y) { return x.name < y.name; });
    nodes_ = std::move(nodes);
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
      if (nodes_[i].name == nodes_[i + 1].name) {
        throw ValidationError("duplicate node '" + nodes_[i].name + "'");
      }
    }
    if (link_ends.size() != lengths_km.size()) {
      throw ValidationError("link/length count mismatch");
    }
    for (std::size_t i = 0; i < link_ends.size(); ++i) {
      Link lk;
      lk.a = node_index(link_ends[i][0]);
      lk.b = node_index(link_ends[i][1]);
      if (lk.a == lk.b) {
        throw ValidationError("self-loop on node '" + link_ends[i][0] + "'");
      }
      if (lk.a > lk.b) std::swap(lk.a, lk.b);
      lk.length_km = lengths_km[i];
      links_.push_back(lk);
    }
    std::sort(links_.begin(), links_.end(), [](const Link& x, const Link& y) {
      return std::pair{x.a, x.b} < std::pair{y.a, y.b};
    });
    for (std::size_t i = 0; i + 1 < links_.size(); ++i) {
      if (links_[i].a == links_[i + 1].a && links_[i].b == links_[i + 1].b) {
        throw ValidationError("duplicate link between '" + nodes_[links_[i].a].name +
                              "' and '" + nodes_[links_[i].b].name + "'");
      }
    }
    for (auto& lk : links_) lk.spans = build_spans(lk.length_km, span_params);
    build_adjacency();
    validate();
  }

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(int id) const { return links_[static_cast<std::size_t>(id)]; }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  int node_index(const std::string& name) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name,
                               [](const Node& n, const std::string& s) { return n.name < s; });
    if (it == nodes_.end() || it->name != name) {
      throw ValidationError("unknown node '" + name + "'");
    }
    return static_cast<int>(it - nodes_.begin());
  }

  // (neighbor node, link id) pairs sorted by neighbor index.
  const std::vector<std::pair<int, int>>& neighbors(int node) const {
    return adjacency_[static_cast<std::size_t>(node)];
  }

  int find_link(int u, int v) const {
    if (u > v) std::swap(u, v);
    for (const auto& [nbr, lid] : adjacency_[static_cast<std::size_t>(u)]) {
      if (nbr == v) return lid;
    }
    return -1;
  }

  void validate() const {
    if (nodes_.empty()) throw ValidationError("topology has no nodes");
    for (const auto& lk : links_) {
      if (!(lk.length_km > 0.0)) {
        throw ValidationError("link " + nodes_[lk.a].name + "-" + nodes_[lk.b].name +
                              " has non-positive length");
      }
      double sum = 0.0;
      for (const auto& s : lk.spans) sum += s.length_km;
      if (std::abs(sum - lk.length_km) > 1e-9) {
        throw ValidationError("span lengths do not sum to link length on " +
                              nodes_[lk.a].name + "-" + nodes_[lk.b].name);
      }
    }
    // Connectivity.
    std::vector<char> seen(nodes_.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const auto& [v, lid] : adjacency_[static_cast<std::size_t>(u)]) {
        (void)lid;
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          ++reached;
          q.push(v);
        }
      }
    }
    if (reached != node_count()) {
      throw ValidationError("topology is disconnected (" + std::to_string(reached) + " of " +
                            std::to_string(node_count()) + " nodes reachable)");
    }
  }

 private:
  void build_adjacency() {
    adjacency_.assign(nodes_.size(), {});
    for (int i = 0; i < link_count(); ++i) {
      adjacency_[static_cast<std::size_t>(links_[i].a)].push_back({links_[i].b, i});
      adjacency_[static_cast<std::size_t>(links_[i].b)].push_back({links_[i].a, i});
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  }

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
};

}  // namespace clplan
