#include "navrl/occupancy_grid.hpp"

#include <cstdio>
#include <stdexcept>

namespace navrl {

void OccupancyGrid::save_pgm(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "P5\n%d %d\n255\n", cols_, rows_);
  for (int r = rows_ - 1; r >= 0; --r) {
    std::fwrite(&data_[static_cast<size_t>(r) * cols_], 1, cols_, f);
  }
  std::fclose(f);
}

}  // namespace navrl
