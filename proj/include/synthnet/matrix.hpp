#pragma once

#include <cstddef>
#include <vector>

namespace synthnet {

// Dense row-major matrix of doubles. Sizes here are tiny (tens of columns),
// so no BLAS; plain loops keep results bit-reproducible.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

}  // namespace synthnet
