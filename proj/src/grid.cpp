#include "tca/grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tca/errors.hpp"

namespace tca {

const char* to_string(GridKind kind) {
  switch (kind) {
    case GridKind::taxonomic:
      return "taxonomic";
    case GridKind::semantic:
      return "semantic";
    case GridKind::final:
      return "final";
  }
  return "unknown";
}

namespace {

void check_ids(const std::vector<std::string>& ids, const char* axis) {
  if (ids.empty()) throw ContractError(std::string("grid has no ") + axis, axis);
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw ContractError("duplicate LO id '" + id + "' in grid " + axis, axis);
  }
}

}  // namespace

SimilarityGrid::SimilarityGrid(GridKind kind, std::vector<std::string> row_ids, std::vector<std::string> col_ids)
    : kind_(kind), row_ids_(std::move(row_ids)), col_ids_(std::move(col_ids)) {
  check_ids(row_ids_, "rows");
  check_ids(col_ids_, "cols");
  cells_.assign(rows() * cols(), 0.0);
  flags_.assign(rows() * cols(), 0);
}

void SimilarityGrid::set(std::size_t row, std::size_t col, double value) {
  const double lo = kind_ == GridKind::semantic ? -1.0 : 0.0;
  if (!(value >= lo && value <= 1.0)) {
    throw ContractError(std::string(to_string(kind_)) + " grid cell out of range: " + std::to_string(value));
  }
  cells_.at(row * cols() + col) = value;
}

bool SimilarityGrid::any_flagged() const {
  return std::any_of(flags_.begin(), flags_.end(), [](unsigned char f) { return f != 0; });
}

SimilarityGrid SimilarityGrid::transposed() const {
  SimilarityGrid t(kind_, col_ids_, row_ids_);
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols(); ++c) {
      t.cells_[c * rows() + r] = at(r, c);
      t.flags_[c * rows() + r] = flags_[r * cols() + c];
    }
  }
  return t;
}

}  // namespace tca
