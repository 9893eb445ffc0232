#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace flowcast {

/// Dense row-major matrix of doubles. Rows index time steps (days), columns
/// index features. Immutable by convention once handed to another component;
/// all mutating access happens through the owner.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    /// Build from nested braces, e.g. Matrix::from_rows({{1,2},{3,4}}).
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    void fill(double v);
    bool all_finite() const;
    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    /// "RxC", used in shape-error messages.
    std::string shape_str() const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class ElemOp { add, sub, mul };

/// Standard matrix product; throws ShapeError naming both shapes when the
/// inner dimensions disagree.
Matrix matmul(const Matrix& a, const Matrix& b);

/// Entrywise add/sub/mul of equally shaped matrices.
Matrix elementwise(const Matrix& a, const Matrix& b, ElemOp op);

Matrix transpose(const Matrix& a);

}  // namespace flowcast
