#pragma once

// Brute-force reference for the taxonomy measures on small ontologies. It
// reads the data file on its own and uses all-pairs Floyd-Warshall instead of
// the library's BFS, so the two implementations share nothing but the file.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tca::testing {

class BruteForceOntology {
 public:
  static constexpr int kInf = std::numeric_limits<int>::max() / 4;

  explicit BruteForceOntology(const std::string& dir) {
    std::ifstream data(dir + "/data.verb");
    if (!data) throw std::runtime_error("cannot open " + dir + "/data.verb");
    std::vector<std::vector<std::uint32_t>> parents_by_offset;
    std::string line;
    while (std::getline(data, line)) {
      if (line.empty() || line[0] == ' ') continue;
      std::istringstream in(line.substr(0, line.find(" | ")));
      std::vector<std::string> f;
      for (std::string t; in >> t;) f.push_back(t);
      offsets_.push_back(static_cast<std::uint32_t>(std::stoul(f[0])));
      const std::size_t words = std::stoul(f[3], nullptr, 16);
      std::size_t pos = 4 + 2 * words;
      const std::size_t pointers = std::stoul(f[pos++]);
      std::vector<std::uint32_t> parents;
      for (std::size_t p = 0; p < pointers; ++p, pos += 4) {
        if (f[pos] == "@" && f[pos + 2] == "v") parents.push_back(static_cast<std::uint32_t>(std::stoul(f[pos + 1])));
      }
      parents_by_offset.push_back(parents);
    }

    // Node 0 is the virtual root; synsets follow in file order.
    const std::size_t n = offsets_.size() + 1;
    std::map<std::uint32_t, std::size_t> node_of;
    for (std::size_t i = 0; i < offsets_.size(); ++i) node_of[offsets_[i]] = i + 1;
    undirected_.assign(n, std::vector<int>(n, kInf));
    up_.assign(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) undirected_[i][i] = up_[i][i] = 0;
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
      std::vector<std::size_t> ps;
      for (auto off : parents_by_offset[i]) ps.push_back(node_of.at(off));
      if (ps.empty()) ps.push_back(0);
      for (auto p : ps) {
        up_[i + 1][p] = 1;
        undirected_[i + 1][p] = undirected_[p][i + 1] = 1;
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          undirected_[i][j] = std::min(undirected_[i][j], undirected_[i][k] + undirected_[k][j]);
          up_[i][j] = std::min(up_[i][j], up_[i][k] + up_[k][j]);
        }
      }
    }
    for (std::size_t i = 1; i < n; ++i) max_depth_ = std::max(max_depth_, up_[i][0]);
  }

  const std::vector<std::uint32_t>& offsets() const { return offsets_; }
  int max_depth() const { return max_depth_; }
  int depth(std::uint32_t offset) const { return up_[node(offset)][0]; }
  int path_len(std::uint32_t a, std::uint32_t b) const { return undirected_[node(a)][node(b)]; }

  double path(std::uint32_t a, std::uint32_t b) const { return 1.0 / (1.0 + path_len(a, b)); }

  double lch(std::uint32_t a, std::uint32_t b) const {
    return -std::log(std::max(path_len(a, b), 1) / (2.0 * max_depth_));
  }

  // Deepest common ancestor; ties go to the shorter combined climb, then to
  // the lower offset (the root counts as offset 0).
  double wup(std::uint32_t a, std::uint32_t b) const {
    const auto na = node(a), nb = node(b);
    std::size_t best = 0;
    bool found = false;
    for (std::size_t c = 0; c < up_.size(); ++c) {
      if (up_[na][c] >= kInf || up_[nb][c] >= kInf) continue;
      auto key = [&](std::size_t x) {
        return std::make_tuple(-up_[x][0], up_[na][x] + up_[nb][x], x == 0 ? 0u : offsets_[x - 1]);
      };
      if (!found || key(c) < key(best)) {
        best = c;
        found = true;
      }
    }
    const int d_lcs = up_[best][0];
    const int da = d_lcs + up_[na][best];
    const int db = d_lcs + up_[nb][best];
    return da + db == 0 ? 0.0 : 2.0 * d_lcs / (da + db);
  }

 private:
  std::size_t node(std::uint32_t offset) const {
    auto it = std::find(offsets_.begin(), offsets_.end(), offset);
    if (it == offsets_.end()) throw std::out_of_range("unknown offset");
    return static_cast<std::size_t>(it - offsets_.begin()) + 1;
  }

  std::vector<std::uint32_t> offsets_;
  std::vector<std::vector<int>> undirected_;
  std::vector<std::vector<int>> up_;
  int max_depth_ = 0;
};

}  // namespace tca::testing
