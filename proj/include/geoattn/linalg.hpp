#pragma once

// Dense row-major double matrices with fixed accumulation order.
//
// Every routine here is a pure function of its inputs, and every reduction
// walks its operands in the same index order on every call, so results are
// bit-reproducible across runs and safe to freeze into tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoattn {

using Vector = std::vector<double>;

/// Raised when operand shapes are incompatible. The message names both shapes.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when user-supplied data contains NaN or Inf.
class NonFiniteError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised on malformed serialized input.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string shape_str(std::size_t rows, std::size_t cols) {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Builds a matrix from user data; rejects ragged rows and non-finite entries.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        Matrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) {
                throw DimensionError("ragged row " + std::to_string(i) + ": expected " +
                                     std::to_string(c) + " columns, got " +
                                     std::to_string(rows[i].size()));
            }
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        m.require_finite();
        return m;
    }

    /// Takes ownership of a flat row-major buffer; rejects non-finite entries.
    static Matrix from_data(std::size_t rows, std::size_t cols, std::vector<double> data) {
        if (data.size() != rows * cols) {
            throw DimensionError("buffer of " + std::to_string(data.size()) +
                                 " values cannot fill a " + shape_str(rows, cols) + " matrix");
        }
        Matrix m;
        m.rows_ = rows;
        m.cols_ = cols;
        m.data_ = std::move(data);
        m.require_finite();
        return m;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    std::string shape() const { return shape_str(rows_, cols_); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    Vector row(std::size_t i) const {
        return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }

    Vector col(std::size_t j) const {
        Vector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    void set_row(std::size_t i, const Vector& v) {
        if (v.size() != cols_) {
            throw DimensionError("row of length " + std::to_string(v.size()) +
                                 " does not fit a " + shape() + " matrix");
        }
        std::copy(v.begin(), v.end(), data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
    }

    void set_col(std::size_t j, const Vector& v) {
        if (v.size() != rows_) {
            throw DimensionError("column of length " + std::to_string(v.size()) +
                                 " does not fit a " + shape() + " matrix");
        }
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
    }

    void require_finite() const {
        for (std::size_t k = 0; k < data_.size(); ++k) {
            if (!std::isfinite(data_[k])) {
                throw NonFiniteError("non-finite entry at (" + std::to_string(k / cols_) + ", " +
                                     std::to_string(k % cols_) + ")");
            }
        }
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
    return t;
}

/// Standard product. Accumulates over k in increasing order for every (i, j).
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: cannot multiply " + a.shape() + " by " + b.shape());
    }
    Matrix out(a.rows(), b.cols());
    const std::size_t inner = a.cols();
    const std::size_t bc = b.cols();
    const double* bd = b.data().data();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* orow = &out(i, 0);
        // i-k-j order: each out(i, j) still sums k = 0, 1, ... in sequence.
        for (std::size_t k = 0; k < inner; ++k) {
            const double aik = a(i, k);
            const double* brow = bd + k * bc;
            for (std::size_t j = 0; j < bc; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

inline double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw DimensionError("dot: lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " differ");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

inline double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double x : m.data()) s += x * x;
    return std::sqrt(s);
}

/// Euclidean norm of every column.
inline Vector col_norms(const Matrix& m) {
    Vector sq(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) sq[j] += m(i, j) * m(i, j);
    for (double& s : sq) s = std::sqrt(s);
    return sq;
}

inline Vector row_norms(const Matrix& m) {
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
        out[i] = std::sqrt(s);
    }
    return out;
}

/// Row-wise softmax, each row shifted by its maximum before exponentiation.
///
/// Entries equal to -inf are treated as masked and receive weight 0. A row
/// with every entry masked has no distribution and is rejected.
inline Matrix softmax_rows(const Matrix& m) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m.cols(); ++j) mx = std::max(mx, m(i, j));
        if (m.cols() == 0) continue;
        if (mx == -std::numeric_limits<double>::infinity()) {
            throw std::invalid_argument("softmax_rows: row " + std::to_string(i) +
                                        " is fully masked");
        }
        double sum = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double e = std::exp(m(i, j) - mx);
            out(i, j) = e;
            sum += e;
        }
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) /= sum;
    }
    return out;
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("add: shapes " + a.shape() + " and " + b.shape() + " differ");
    }
    Matrix out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] += b.data()[k];
    return out;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("subtract: shapes " + a.shape() + " and " + b.shape() + " differ");
    }
    Matrix out = a;
    for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] -= b.data()[k];
    return out;
}

inline Matrix operator*(double s, const Matrix& a) {
    Matrix out = a;
    for (double& x : out.data()) x *= s;
    return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff: shapes " + a.shape() + " and " + b.shape() +
                             " differ");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

/// Columns [first, first + count) as a new matrix.
inline Matrix col_slice(const Matrix& m, std::size_t first, std::size_t count) {
    if (first + count > m.cols()) {
        throw DimensionError("col_slice: columns [" + std::to_string(first) + ", " +
                             std::to_string(first + count) + ") exceed " + m.shape());
    }
    Matrix out(m.rows(), count);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = m(i, first + j);
    return out;
}

inline void write_col_slice(Matrix& dst, std::size_t first, const Matrix& src) {
    if (src.rows() != dst.rows() || first + src.cols() > dst.cols()) {
        throw DimensionError("write_col_slice: " + src.shape() + " at column " +
                             std::to_string(first) + " does not fit " + dst.shape());
    }
    for (std::size_t i = 0; i < src.rows(); ++i)
        for (std::size_t j = 0; j < src.cols(); ++j) dst(i, first + j) = src(i, j);
}

/// Stacks the rows of `b` under the rows of `a`.
inline Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw DimensionError("vstack: shapes " + a.shape() + " and " + b.shape() +
                             " differ in column count");
    }
    Matrix out(a.rows() + b.rows(), a.cols());
    std::copy(a.data().begin(), a.data().end(), out.data().begin());
    std::copy(b.data().begin(), b.data().end(),
              out.data().begin() + static_cast<std::ptrdiff_t>(a.size()));
    return out;
}

// ---------------------------------------------------------------------------
// CSV: first line `rows,cols`, then one comma-separated row per line, written
// with 17 significant digits so every double round-trips exactly.

inline std::string format_double(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << x;
    return os.str();
}

inline double parse_double(const std::string& token) {
    std::istringstream is(token);
    is.imbue(std::locale::classic());
    double x = 0.0;
    is >> x;
    if (is.fail()) throw FormatError("cannot parse number '" + token + "'");
    is >> std::ws;
    if (!is.eof()) throw FormatError("trailing characters in number '" + token + "'");
    return x;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline void write_csv(std::ostream& os, const Matrix& m) {
    os << m.rows() << ',' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << format_double(m(i, j));
        }
        os << '\n';
    }
}

inline Matrix read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("empty matrix CSV");
    const auto header = split_csv_line(line);
    if (header.size() != 2) throw FormatError("matrix CSV header must be 'rows,cols'");
    const auto rows = static_cast<std::size_t>(std::stoull(header[0]));
    const auto cols = static_cast<std::size_t>(std::stoull(header[1]));
    std::vector<double> data;
    data.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(is, line)) {
            throw FormatError("matrix CSV ends after " + std::to_string(i) + " of " +
                              std::to_string(rows) + " rows");
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != cols) {
            throw FormatError("row " + std::to_string(i) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(cols));
        }
        for (const auto& c : cells) data.push_back(parse_double(c));
    }
    return Matrix::from_data(rows, cols, std::move(data));
}

}  // namespace geoattn
