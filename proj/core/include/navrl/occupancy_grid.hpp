#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "navrl/types.hpp"

namespace navrl {

// Cost conventions, compatible with ROS-style inflation layers.
// 255 marks a cell covered by obstacle geometry, 254 a cell whose center
// lies strictly inside the inscribed radius of one, 253 the inscribed
// boundary itself. Anything >= 254 is treated as in collision by planners.
inline constexpr uint8_t kCostFree = 0;
inline constexpr uint8_t kCostInscribed = 253;
inline constexpr uint8_t kCostLethal = 254;
inline constexpr uint8_t kCostObstacle = 255;

inline constexpr bool is_lethal(uint8_t cost) { return cost >= kCostLethal; }

struct CellIndex {
  int row = 0;
  int col = 0;
  bool operator==(const CellIndex&) const = default;
};

// Row-major uint8 cost grid. Row r, column c covers the world square
// [origin + (c, r) * resolution, origin + (c+1, r+1) * resolution), so row
// index grows with +y and column index with +x.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int rows, int cols, double resolution, Point2 origin,
                uint8_t fill = kCostFree)
      : rows_(rows), cols_(cols), resolution_(resolution), origin_(origin),
        data_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double resolution() const { return resolution_; }
  Point2 origin() const { return origin_; }

  uint8_t& at(int row, int col) { return data_[static_cast<size_t>(row) * cols_ + col]; }
  uint8_t at(int row, int col) const { return data_[static_cast<size_t>(row) * cols_ + col]; }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < rows_ && col >= 0 && col < cols_;
  }
  bool in_bounds(CellIndex c) const { return in_bounds(c.row, c.col); }

  CellIndex world_to_cell(Point2 p) const {
    return {static_cast<int>(std::floor((p.y - origin_.y) / resolution_)),
            static_cast<int>(std::floor((p.x - origin_.x) / resolution_))};
  }
  Point2 cell_center(CellIndex c) const {
    return {origin_.x + (c.col + 0.5) * resolution_,
            origin_.y + (c.row + 0.5) * resolution_};
  }
  Point2 cell_center(int row, int col) const { return cell_center(CellIndex{row, col}); }

  const std::vector<uint8_t>& data() const { return data_; }
  std::vector<uint8_t>& data() { return data_; }

  // Binary P5 PGM, maxval 255. Rows are flipped so +y points up in the
  // image.
  void save_pgm(const std::string& path) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  double resolution_ = 0.05;
  Point2 origin_{0.0, 0.0};
  std::vector<uint8_t> data_;
};

}  // namespace navrl
