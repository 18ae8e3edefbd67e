#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "treelearn/channels.hpp"
#include "treelearn/model.hpp"

namespace treelearn {

using nlohmann::json;

// Model documents are JSON (self-describing key/value with nested tables).
// Numbers are written in shortest round-trip decimal form and keys are
// emitted in sorted order, so load(save(m)) reproduces the document byte
// for byte.

inline json to_json(const DiscreteTreeModel& m) {
  json j;
  j["type"] = "discrete_tree_model";
  j["node_count"] = m.tree.node_count();
  j["alphabet_size"] = m.alphabet_size;
  j["symbol_values"] = m.symbol_values;
  json edges = json::array();
  for (const Edge& e : m.tree.edges()) edges.push_back({e.a, e.b});
  j["edges"] = edges;
  j["node_marginals"] = m.node_marginals;
  json joints = json::array();
  for (const Edge& e : m.tree.edges()) {
    const Table& t = m.edge_joints.at(e);
    json rows = json::array();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < t.cols(); ++c) row.push_back(t(r, c));
      rows.push_back(row);
    }
    joints.push_back({{"edge", {e.a, e.b}}, {"table", rows}});
  }
  j["edge_joints"] = joints;
  if (m.allow_degenerate_edges) j["allow_degenerate_edges"] = true;
  if (m.tail) j["tail"] = {{"c", m.tail->c}, {"c1", m.tail->c1}, {"c2", m.tail->c2}};
  return j;
}

inline DiscreteTreeModel model_from_json(const json& j) {
  const std::string type = j.value("type", "discrete_tree_model");
  const int p = j.at("node_count").get<int>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back(make_edge(e.at(0).get<int>(), e.at(1).get<int>()));
  Tree tree(p, std::move(edges));

  if (type == "binary_correlation_model") {
    std::vector<double> rho = j.at("correlations").get<std::vector<double>>();
    return to_discrete(make_binary_model(std::move(tree), rho));
  }
  if (type != "discrete_tree_model")
    throw std::invalid_argument("model_from_json: unknown model type '" + type + "'");

  DiscreteTreeModel m{std::move(tree),
                      j.at("alphabet_size").get<int>(),
                      {},
                      j.at("node_marginals").get<std::vector<std::vector<double>>>(),
                      {},
                      j.value("allow_degenerate_edges", false),
                      std::nullopt};
  if (j.contains("symbol_values"))
    m.symbol_values = j.at("symbol_values").get<std::vector<int>>();
  else
    m.symbol_values = default_symbols(m.alphabet_size);
  for (const auto& ej : j.at("edge_joints")) {
    const Edge e = make_edge(ej.at("edge").at(0).get<int>(), ej.at("edge").at(1).get<int>());
    const auto rows = ej.at("table").get<std::vector<std::vector<double>>>();
    Table t(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != t.cols())
        throw std::invalid_argument("model_from_json: ragged joint table");
      for (std::size_t c = 0; c < t.cols(); ++c) t(r, c) = rows[r][c];
    }
    m.edge_joints.emplace(e, std::move(t));
  }
  if (j.contains("tail"))
    m.tail = TailParams{j.at("tail").at("c").get<double>(),
                        j.at("tail").at("c1").get<double>(),
                        j.at("tail").at("c2").get<double>()};
  return m;
}

inline std::string save_model_text(const DiscreteTreeModel& m) {
  return to_json(m).dump(2) + "\n";
}

inline DiscreteTreeModel load_model_text(const std::string& text) {
  return model_from_json(json::parse(text));
}

inline void save_model_file(const DiscreteTreeModel& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << save_model_text(m);
}

inline DiscreteTreeModel load_model_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return load_model_text(ss.str());
}

// Channel descriptor: {"kind": "identity|erasure|bsc|msym", "q": x or [x...]}.
inline json to_json(const ChannelSpec& ch) {
  json j;
  switch (ch.kind) {
    case ChannelKind::identity: j["kind"] = "identity"; break;
    case ChannelKind::erasure: j["kind"] = "erasure"; break;
    case ChannelKind::binary_symmetric: j["kind"] = "bsc"; break;
    case ChannelKind::m_ary_symmetric: j["kind"] = "msym"; break;
  }
  if (!ch.q.empty()) j["q"] = ch.q.size() == 1 ? json(ch.q[0]) : json(ch.q);
  return j;
}

inline ChannelSpec channel_from_json(const json& j) {
  ChannelSpec ch;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity")
    ch.kind = ChannelKind::identity;
  else if (kind == "erasure")
    ch.kind = ChannelKind::erasure;
  else if (kind == "bsc")
    ch.kind = ChannelKind::binary_symmetric;
  else if (kind == "msym")
    ch.kind = ChannelKind::m_ary_symmetric;
  else
    throw std::invalid_argument("channel_from_json: unknown kind '" + kind + "'");
  if (j.contains("q")) {
    if (j.at("q").is_array())
      ch.q = j.at("q").get<std::vector<double>>();
    else
      ch.q = {j.at("q").get<double>()};
  }
  return ch;
}

}  // namespace treelearn
