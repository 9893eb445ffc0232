#include "flowcast/matrix.hpp"

#include <cmath>

#include "flowcast/errors.hpp"

namespace flowcast {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
        throw ArgumentError("Matrix dimensions must be positive, got " + shape_str());
    }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    if (rows.size() == 0) throw ShapeError("from_rows: no rows given");
    Matrix m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != m.cols_) {
            throw ShapeError("ragged initializer: row " + std::to_string(r) + " has " +
                             std::to_string(row.size()) + " entries, expected " +
                             std::to_string(m.cols_));
        }
        std::size_t c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

void Matrix::fill(double v) {
    for (double& x : data_) x = v;
}

bool Matrix::all_finite() const {
    for (double x : data_) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

std::string Matrix::shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions disagree, " + a.shape_str() + " * " +
                         b.shape_str());
    }
    Matrix out(a.rows(), b.cols());
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    for (std::size_t i = 0; i < n; ++i) {
        double* out_row = out.row(i);
        const double* a_row = a.row(i);
        for (std::size_t p = 0; p < k; ++p) {
            const double av = a_row[p];
            const double* b_row = b.row(p);
            for (std::size_t j = 0; j < m; ++j) out_row[j] += av * b_row[j];
        }
    }
    return out;
}

Matrix elementwise(const Matrix& a, const Matrix& b, ElemOp op) {
    if (!a.same_shape(b)) {
        throw ShapeError("elementwise: shapes differ, " + a.shape_str() + " vs " + b.shape_str());
    }
    Matrix out(a.rows(), a.cols());
    const double* pa = a.data();
    const double* pb = b.data();
    double* po = out.data();
    const std::size_t n = a.size();
    switch (op) {
        case ElemOp::add:
            for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] + pb[i];
            break;
        case ElemOp::sub:
            for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] - pb[i];
            break;
        case ElemOp::mul:
            for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] * pb[i];
            break;
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    }
    return out;
}

}  // namespace flowcast
