#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace maxdist {

// A p x n matrix of finite reals, row-major. Rows are the sample points;
// columns are coordinates. Entries are validated on construction.
class DataMatrix {
  public:
    DataMatrix(std::size_t p, std::size_t n, std::vector<double> values);

    static DataMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return p_; }
    std::size_t cols() const { return n_; }

    std::span<const double> row(std::size_t i) const {
        return {values_.data() + i * n_, n_};
    }
    double at(std::size_t i, std::size_t k) const { return values_[i * n_ + k]; }
    const std::vector<double>& values() const { return values_; }

  private:
    std::size_t p_;
    std::size_t n_;
    std::vector<double> values_;
};

}  // namespace maxdist
