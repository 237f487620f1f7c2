#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sstat {

/// Dense row-major matrix of binary64. Small: lives at the
/// sufficient-statistics boundary where p is at most a few hundred.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return v_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return v_[r * cols_ + c]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> v_;
};

inline double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) s += m(r, c) * m(r, c);
    return std::sqrt(s);
}

/// Symmetric matrix stored as the packed upper triangle (row-major:
/// (0,0),(0,1),...,(0,p-1),(1,1),...). Symmetry holds by construction.
class SymPacked {
public:
    SymPacked() = default;
    explicit SymPacked(std::size_t p) : p_(p), v_(p * (p + 1) / 2, 0.0) {}

    std::size_t dim() const { return p_; }
    std::size_t packed_size() const { return v_.size(); }

    std::size_t index(std::size_t j, std::size_t k) const {
        if (j > k) std::swap(j, k);
        return j * p_ - j * (j - 1) / 2 + (k - j);
    }

    double at(std::size_t j, std::size_t k) const { return v_[index(j, k)]; }
    double& ref(std::size_t j, std::size_t k) { return v_[index(j, k)]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }

    Matrix to_full() const {
        Matrix m(p_, p_);
        for (std::size_t j = 0; j < p_; ++j)
            for (std::size_t k = j; k < p_; ++k) m(j, k) = m(k, j) = at(j, k);
        return m;
    }

    bool operator==(const SymPacked&) const = default;

private:
    std::size_t p_ = 0;
    std::vector<double> v_;
};

} // namespace sstat
