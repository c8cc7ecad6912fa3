#pragma once

// Oblique manifold OB(n, g): n x g matrices whose columns all have unit
// Euclidean norm, i.e. a product of g unit spheres.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoattn/linalg.hpp"

namespace geoattn::oblique {

inline constexpr double kDefaultClip = 1e-4;
inline constexpr double kDefaultZeroNorm = 1e-12;
inline constexpr double kUnitTolerance = 1e-12;

/// Raised when a matrix claimed to lie on the manifold does not.
class ManifoldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Projection;
inline Projection project(const Matrix& m, double eps_zero = kDefaultZeroNorm);

/// A matrix whose every column has unit norm to within 1e-12.
class ObliqueMatrix {
public:
    /// Wraps `m` after checking the unit-column invariant.
    static ObliqueMatrix from_unit_columns(Matrix m, double tol = kUnitTolerance) {
        const Vector norms = col_norms(m);
        for (std::size_t j = 0; j < norms.size(); ++j) {
            if (std::abs(norms[j] - 1.0) > tol) {
                throw ManifoldError("column " + std::to_string(j) + " has norm " +
                                    format_double(norms[j]) + ", expected 1");
            }
        }
        return ObliqueMatrix(std::move(m));
    }

    const Matrix& matrix() const noexcept { return inner_; }
    std::size_t rows() const noexcept { return inner_.rows(); }
    std::size_t cols() const noexcept { return inner_.cols(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return inner_(i, j); }

private:
    friend Projection project(const Matrix&, double);
    explicit ObliqueMatrix(Matrix m) : inner_(std::move(m)) {}

    Matrix inner_;
};

/// Result of projecting onto the manifold. `degenerate[j]` is set when column
/// j had norm below the zero threshold and was replaced by e1.
struct Projection {
    ObliqueMatrix point;
    std::vector<bool> degenerate;
};

/// Divides every column by its norm. Columns with norm below `eps_zero` become
/// the unit vector e1 and are flagged instead of raising.
inline Projection project(const Matrix& m, double eps_zero) {
    const Vector norms = col_norms(m);
    Matrix out(m.rows(), m.cols());
    std::vector<bool> flags(m.cols(), false);
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (!(norms[j] >= eps_zero)) {
            flags[j] = true;
            if (m.rows() > 0) out(0, j) = 1.0;
            continue;
        }
        for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, j) / norms[j];
    }
    return Projection{ObliqueMatrix(std::move(out)), std::move(flags)};
}

inline double clip_cosine(double c, double eps_clip) {
    return std::clamp(c, -1.0 + eps_clip, 1.0 - eps_clip);
}

/// sqrt(sum_j arccos^2(clip(q_j . k_j))) over the g column pairs.
///
/// The clip keeps arccos finite and differentiable, so identical inputs have
/// distance sqrt(g) * arccos(1 - eps_clip) (0.014142 per column at 1e-4), not 0.
inline double geodesic_distance(const ObliqueMatrix& q, const ObliqueMatrix& k,
                                double eps_clip = kDefaultClip) {
    if (q.rows() != k.rows() || q.cols() != k.cols()) {
        throw DimensionError("oblique geodesic_distance: shapes " + q.matrix().shape() +
                             " and " + k.matrix().shape() + " differ");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < q.cols(); ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < q.rows(); ++i) c += q(i, j) * k(i, j);
        const double a = std::acos(clip_cosine(c, eps_clip));
        total += a * a;
    }
    return std::sqrt(total);
}

/// Checks that every row of `m` has unit norm (rows are single-column points).
inline void require_unit_rows(const Matrix& m, const char* what, double tol = 1e-9) {
    const Vector norms = row_norms(m);
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (std::abs(norms[i] - 1.0) > tol) {
            throw ManifoldError(std::string(what) + " row " + std::to_string(i) + " has norm " +
                                format_double(norms[i]) + ", expected 1");
        }
    }
}

/// Normalizes every row to unit length, with the same zero-row policy as project().
inline Matrix project_rows(const Matrix& m, double eps_zero = kDefaultZeroNorm) {
    return transpose(project(transpose(m), eps_zero).point.matrix());
}

/// D(i, j) = arccos(clip(q_i . k_j)), treating each unit-norm row as a point
/// on the sphere (the single-column oblique case).
inline Matrix pairwise_distances(const Matrix& q, const Matrix& k,
                                 double eps_clip = kDefaultClip) {
    if (q.cols() != k.cols()) {
        throw DimensionError("oblique pairwise_distances: feature dims of " + q.shape() +
                             " and " + k.shape() + " differ");
    }
    require_unit_rows(q, "query");
    require_unit_rows(k, "key");
    Matrix d = matmul(q, transpose(k));
    for (double& x : d.data()) x = std::acos(clip_cosine(x, eps_clip));
    return d;
}

/// A direction in the tangent space at `base`: every column of `delta` is
/// orthogonal to the matching column of `base`.
struct ObliqueTangent {
    ObliqueMatrix base;
    Matrix delta;
};

/// Column-wise orthogonal projection xi_j = g_j - (w_j . g_j) w_j.
/// Removing the normal part can only shrink the Frobenius norm.
inline ObliqueTangent tangent_project(const ObliqueMatrix& w, const Matrix& grad) {
    if (w.rows() != grad.rows() || w.cols() != grad.cols()) {
        throw DimensionError("tangent_project: shapes " + w.matrix().shape() + " and " +
                             grad.shape() + " differ");
    }
    Matrix xi = grad;
    for (std::size_t j = 0; j < w.cols(); ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) c += w(i, j) * grad(i, j);
        for (std::size_t i = 0; i < w.rows(); ++i) xi(i, j) -= c * w(i, j);
    }
    return ObliqueTangent{w, std::move(xi)};
}

/// Largest |base_j . delta_j| over columns.
inline double tangency_residual(const ObliqueTangent& t) {
    double worst = 0.0;
    for (std::size_t j = 0; j < t.base.cols(); ++j) {
        double c = 0.0;
        for (std::size_t i = 0; i < t.base.rows(); ++i) c += t.base(i, j) * t.delta(i, j);
        worst = std::max(worst, std::abs(c));
    }
    return worst;
}

/// Metric-projection retraction: renormalize base + step * delta.
inline ObliqueMatrix retract(const ObliqueTangent& t, double step) {
    return project(t.base.matrix() + step * t.delta).point;
}

/// Gradient of arccos(clip(q . k)) with respect to q: -k / sqrt(1 - c^2), where
/// c is the clipped dot product. Finite everywhere because of the clip.
inline Vector distance_gradient(const Vector& q, const Vector& k,
                                double eps_clip = kDefaultClip) {
    const double c = clip_cosine(dot(q, k), eps_clip);
    const double scale = -1.0 / std::sqrt((1.0 - c) * (1.0 + c));
    Vector g(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) g[i] = scale * k[i];
    return g;
}

}  // namespace geoattn::oblique
