#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace treelearn {

// A dataset of n i.i.d. rows over p nodes. Cells hold symbol *values*
// (e.g. 1..M, or -1/+1 for sign-valued models, or M+1 for an erasure).
// `symbol_values` is the declared per-node alphabet; estimators index
// declared plus observed symbols.
struct Dataset {
  int node_count = 0;
  std::vector<int> symbol_values;
  std::vector<std::int32_t> cells;  // row-major, sample_count() x node_count

  std::int64_t sample_count() const {
    return node_count == 0 ? 0 : static_cast<std::int64_t>(cells.size()) / node_count;
  }

  // node is 1-based.
  std::int32_t value_at(std::int64_t row, int node) const {
    return cells[static_cast<std::size_t>(row) * node_count + (node - 1)];
  }
  std::int32_t& value_at(std::int64_t row, int node) {
    return cells[static_cast<std::size_t>(row) * node_count + (node - 1)];
  }
};

inline void write_dataset(std::ostream& os, const Dataset& ds, char sep = ',') {
  const std::int64_t n = ds.sample_count();
  for (std::int64_t r = 0; r < n; ++r) {
    for (int j = 1; j <= ds.node_count; ++j) {
      if (j > 1) os << sep;
      os << ds.value_at(r, j);
    }
    os << '\n';
  }
}

// Reads rows of integers separated by commas, tabs or spaces. The declared
// alphabet is reconstructed as the sorted set of observed values.
inline Dataset read_dataset(std::istream& is) {
  Dataset ds;
  std::string line;
  std::set<int> observed;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',' || c == '\t') c = ' ';
    std::istringstream ls(line);
    std::vector<int> row;
    int v;
    while (ls >> v) row.push_back(v);
    if (row.empty()) continue;
    if (ds.node_count == 0) ds.node_count = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != ds.node_count)
      throw std::invalid_argument("read_dataset: ragged rows");
    for (int x : row) {
      ds.cells.push_back(x);
      observed.insert(x);
    }
  }
  ds.symbol_values.assign(observed.begin(), observed.end());
  return ds;
}

}  // namespace treelearn
