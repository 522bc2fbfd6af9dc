#pragma once

#include <cstddef>
#include <span>

namespace lexplain {

// Read-only view of a dense column-major matrix.
struct DataView {
  const double* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;

  double at(std::size_t r, std::size_t c) const { return data[c * rows + r]; }
  std::span<const double> column(std::size_t c) const {
    return {data + c * rows, rows};
  }
};

}  // namespace lexplain
