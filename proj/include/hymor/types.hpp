#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hymor {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

/// Thrown when matrix shapes do not line up with what an operation expects.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an input fails a structural requirement (non-finite entries,
/// non-monotone jump lists, a violated standing assumption, ...).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a solve cannot proceed because a matrix (or spectrum pair)
/// is singular or numerically too close to singular.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an iterative procedure fails to reach its tolerance.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool all_finite(const Mat& a) {
    return a.allFinite();
}

inline void require_finite(const Mat& a, const std::string& name) {
    if (!a.allFinite())
        throw ValidationError(name + " contains non-finite entries");
}

inline void require_square(const Mat& a, const std::string& name) {
    if (a.rows() != a.cols())
        throw DimensionError(name + " must be square, got " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()));
}

inline void require_shape(const Mat& a, Eigen::Index rows, Eigen::Index cols, const std::string& name) {
    if (a.rows() != rows || a.cols() != cols)
        throw DimensionError(name + " must be " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

/// Builds a matrix from row-major data, checking shape and finiteness.
inline Mat make_mat(Eigen::Index rows, Eigen::Index cols, const std::vector<double>& row_major) {
    if (static_cast<Eigen::Index>(row_major.size()) != rows * cols)
        throw DimensionError("matrix data length " + std::to_string(row_major.size()) + " does not match " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = row_major[static_cast<size_t>(r * cols + c)];
    require_finite(m, "matrix");
    return m;
}

}  // namespace hymor
