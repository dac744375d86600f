#pragma once
// Dense row-major matrix of couplings. Small fixed utility type; the
// enumeration kernels index it directly.
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bsg {

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("Matrix: dimensions must be positive");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    // True when every entry is exactly +-1 (enables integer field kernels).
    bool is_sign_matrix() const {
        for (double v : data_)
            if (v != 1.0 && v != -1.0) return false;
        return true;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

}  // namespace bsg
