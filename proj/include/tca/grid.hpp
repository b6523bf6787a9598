#pragma once

#include <span>
#include <string>
#include <vector>

namespace tca {

enum class GridKind { taxonomic, semantic, final };

const char* to_string(GridKind kind);

// m×n matrix of LO-to-LO scores. Rows are receiving-course LOs, columns are
// sending-course LOs. Semantic cells live in [-1, 1]; taxonomic and final
// cells in [0, 1].
class SimilarityGrid {
 public:
  // Throws ContractError on empty or duplicated id lists.
  SimilarityGrid(GridKind kind, std::vector<std::string> row_ids, std::vector<std::string> col_ids);

  GridKind kind() const { return kind_; }
  const std::vector<std::string>& row_ids() const { return row_ids_; }
  const std::vector<std::string>& col_ids() const { return col_ids_; }
  std::size_t rows() const { return row_ids_.size(); }
  std::size_t cols() const { return col_ids_.size(); }

  double at(std::size_t row, std::size_t col) const { return cells_[row * cols() + col]; }
  // Throws ContractError when value is outside the kind's range.
  void set(std::size_t row, std::size_t col, double value);
  std::span<const double> row(std::size_t r) const { return {cells_.data() + r * cols(), cols()}; }
  const std::vector<double>& cells() const { return cells_; }

  // Diagnostic marker, e.g. a taxonomic cell filled with the neutral value.
  bool flagged(std::size_t row, std::size_t col) const { return flags_[row * cols() + col] != 0; }
  void flag(std::size_t row, std::size_t col) { flags_[row * cols() + col] = 1; }
  bool any_flagged() const;

  SimilarityGrid transposed() const;

 private:
  GridKind kind_;
  std::vector<std::string> row_ids_;
  std::vector<std::string> col_ids_;
  std::vector<double> cells_;
  std::vector<unsigned char> flags_;
};

}  // namespace tca
