#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "clplan/errors.hpp"
#include "clplan/format.hpp"
#include "clplan/state.hpp"
#include "clplan/topology.hpp"

namespace clplan {

namespace detail {

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace detail

// Demand matrix CSV: header `src,dst,gbps`, one unordered pair per row.
// Demands get deterministic ids by sorting pairs lexicographically.
inline std::vector<Demand> read_demand_matrix(const std::string& text, const Topology& topo) {
  auto rows = detail::parse_csv(text);
  if (rows.empty() || rows.front() != std::vector<std::string>{"src", "dst", "gbps"}) {
    throw ParseError("demand matrix must start with header 'src,dst,gbps'");
  }
  std::vector<Demand> demands;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) {
      throw ParseError("demand matrix row " + std::to_string(i + 1) + ": expected 3 fields");
    }
    Demand d;
    d.src = rows[i][0];
    d.dst = rows[i][1];
    topo.node_index(d.src);  // throws on unknown node
    topo.node_index(d.dst);
    if (d.src == d.dst) {
      throw ValidationError("demand row " + std::to_string(i + 1) + ": source equals destination");
    }
    if (d.src > d.dst) std::swap(d.src, d.dst);
    try {
      d.art_gbps = std::stod(rows[i][2]);
    } catch (const std::exception&) {
      throw ParseError("demand matrix row " + std::to_string(i + 1) + ": bad rate '" +
                       rows[i][2] + "'");
    }
    if (d.art_gbps < 0.0) {
      throw ValidationError("demand row " + std::to_string(i + 1) + ": negative rate");
    }
    d.initial_art_gbps = d.art_gbps;
    demands.push_back(std::move(d));
  }
  std::sort(demands.begin(), demands.end(), [](const Demand& x, const Demand& y) {
    return std::pair{x.src, x.dst} < std::pair{y.src, y.dst};
  });
  for (std::size_t i = 0; i + 1 < demands.size(); ++i) {
    if (demands[i].src == demands[i + 1].src && demands[i].dst == demands[i + 1].dst) {
      throw ValidationError("duplicate demand pair " + demands[i].src + "-" + demands[i].dst);
    }
  }
  for (std::size_t i = 0; i < demands.size(); ++i) demands[i].id = static_cast<int>(i);
  return demands;
}

inline std::string write_demand_matrix(const std::vector<Demand>& demands) {
  std::ostringstream out;
  out << "src,dst,gbps\n";
  for (const auto& d : demands) {
    out << d.src << "," << d.dst << "," << format_sig(d.initial_art_gbps) << "\n";
  }
  return out.str();
}

// Node weight CSV: header `node,weight`, weight >= 0.
inline std::map<std::string, double> read_node_weights(const std::string& text,
                                                       const Topology& topo) {
  auto rows = detail::parse_csv(text);
  if (rows.empty() || rows.front() != std::vector<std::string>{"node", "weight"}) {
    throw ParseError("weight file must start with header 'node,weight'");
  }
  std::map<std::string, double> weights;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 2) {
      throw ParseError("weight file row " + std::to_string(i + 1) + ": expected 2 fields");
    }
    topo.node_index(rows[i][0]);  // throws on unknown node
    double w = 0.0;
    try {
      w = std::stod(rows[i][1]);
    } catch (const std::exception&) {
      throw ParseError("weight file row " + std::to_string(i + 1) + ": bad weight");
    }
    if (w < 0.0) {
      throw ValidationError("weight file row " + std::to_string(i + 1) + ": negative weight");
    }
    weights[rows[i][0]] = w;
  }
  return weights;
}

// Gravity-style stand-in for a real traffic model: the period-1 rate of a
// pair is scale * w_s * w_d / sum(w), rounded to 25 Gbit/s granularity.
// Deterministic; every node needs a weight.
inline std::vector<Demand> generate_demands(const Topology& topo,
                                            const std::map<std::string, double>& weights,
                                            double scale) {
  double weight_sum = 0.0;
  for (const auto& n : topo.nodes()) {
    auto it = weights.find(n.name);
    if (it == weights.end()) {
      throw ValidationError("no weight for node '" + n.name + "'");
    }
    weight_sum += it->second;
  }
  if (!(weight_sum > 0.0)) throw ValidationError("weights sum to zero");

  std::vector<Demand> demands;
  for (int i = 0; i < topo.node_count(); ++i) {
    for (int j = i + 1; j < topo.node_count(); ++j) {
      Demand d;
      d.src = topo.node(i).name;
      d.dst = topo.node(j).name;
      const double raw =
          scale * weights.at(d.src) * weights.at(d.dst) / weight_sum;
      d.art_gbps = 25.0 * static_cast<double>(std::llround(raw / 25.0));
      d.initial_art_gbps = d.art_gbps;
      d.id = static_cast<int>(demands.size());
      demands.push_back(std::move(d));
    }
  }
  return demands;
}

}  // namespace clplan
