#include "maxdist/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace maxdist {

DataMatrix::DataMatrix(std::size_t p, std::size_t n, std::vector<double> values)
    : p_(p), n_(n), values_(std::move(values)) {
    if (p_ == 0 || n_ == 0) {
        throw std::invalid_argument("matrix dimensions must be positive, got " +
                                    std::to_string(p_) + "x" + std::to_string(n_));
    }
    if (values_.size() != p_ * n_) {
        throw std::invalid_argument("matrix value count " + std::to_string(values_.size()) +
                                    " does not match " + std::to_string(p_) + "x" +
                                    std::to_string(n_));
    }
    for (std::size_t idx = 0; idx < values_.size(); ++idx) {
        if (!std::isfinite(values_[idx])) {
            throw std::invalid_argument("non-finite entry at row " +
                                        std::to_string(idx / n_) + ", column " +
                                        std::to_string(idx % n_));
        }
    }
}

DataMatrix DataMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("matrix needs at least one row");
    const std::size_t n = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != n) {
            throw std::invalid_argument("row " + std::to_string(i) + " has length " +
                                        std::to_string(rows[i].size()) + ", expected " +
                                        std::to_string(n));
        }
        values.insert(values.end(), rows[i].begin(), rows[i].end());
    }
    return DataMatrix(rows.size(), n, std::move(values));
}

}  // namespace maxdist
