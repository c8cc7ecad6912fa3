#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "geoattn/oblique.hpp"
#include "geoattn/random.hpp"

namespace ob = geoattn::oblique;
using geoattn::Matrix;

namespace {
constexpr double kSelfFloor = 0.0141422534775128776;  // arccos(1 - 1e-4)
}

TEST(Project, UnitColumns) {
    const auto p = ob::project(Matrix::from_rows({{3, 1}, {4, 0}}));
    EXPECT_DOUBLE_EQ(p.point(0, 0), 0.6);
    EXPECT_DOUBLE_EQ(p.point(1, 0), 0.8);
    EXPECT_DOUBLE_EQ(p.point(0, 1), 1.0);
    EXPECT_EQ(p.degenerate, (std::vector<bool>{false, false}));
}

TEST(Project, ZeroColumnFlaggedAndReplaced) {
    const auto p = ob::project(Matrix::from_rows({{0, 2}, {0, 0}, {0, 0}}));
    EXPECT_TRUE(p.degenerate[0]);
    EXPECT_FALSE(p.degenerate[1]);
    EXPECT_EQ(p.point.matrix().col(0), (geoattn::Vector{1, 0, 0}));
}

TEST(Project, Idempotent) {
    geoattn::Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        const Matrix once = ob::project(rng.gaussian(6, 4)).point.matrix();
        EXPECT_LE(geoattn::max_abs_diff(once, ob::project(once).point.matrix()), 1e-15);
    }
}

TEST(Project, ScaleInvariant) {
    geoattn::Rng rng(6);
    const Matrix m = rng.gaussian(5, 3);
    for (double lambda : {1e-3, 0.5, 7.0, 1e3}) {
        EXPECT_LE(geoattn::max_abs_diff(ob::project(m).point.matrix(),
                                        ob::project(lambda * m).point.matrix()),
                  1e-12);
    }
}

TEST(ObliqueMatrix, RejectsNonUnitColumns) {
    EXPECT_THROW(ob::ObliqueMatrix::from_unit_columns(Matrix::from_rows({{1.0}, {0.1}})),
                 ob::ManifoldError);
    EXPECT_NO_THROW(ob::ObliqueMatrix::from_unit_columns(Matrix::from_rows({{0.6}, {0.8}})));
}

TEST(GeodesicDistance, OrthogonalColumns) {
    const auto q = ob::project(Matrix::identity(2)).point;
    const auto k = ob::project(Matrix::from_rows({{0, 1}, {1, 0}})).point;
    EXPECT_NEAR(ob::geodesic_distance(q, k), std::numbers::pi / std::numbers::sqrt2, 1e-15);
}

TEST(GeodesicDistance, ThirtyDegreeColumns) {
    const double c = std::sqrt(3.0) / 2.0;
    const auto q = ob::project(Matrix::identity(2)).point;
    const auto k = ob::project(Matrix::from_rows({{c, 0.5}, {0.5, c}})).point;
    EXPECT_NEAR(ob::geodesic_distance(q, k), 0.74048048969306104, 1e-12);
}

TEST(GeodesicDistance, SelfDistanceIsClipFloor) {
    const auto q = ob::project(Matrix::identity(3)).point;
    EXPECT_NEAR(ob::geodesic_distance(q, q), std::sqrt(3.0) * kSelfFloor, 1e-14);
}

TEST(GeodesicDistance, ShapeMismatch) {
    EXPECT_THROW(ob::geodesic_distance(ob::project(Matrix(2, 2, 1)).point,
                                       ob::project(Matrix(2, 3, 1)).point),
                 geoattn::DimensionError);
}

TEST(PairwiseDistances, RangeAndFloor) {
    const Matrix p = Matrix::from_rows({{1, 0}, {0, 1}, {-1, 0}});
    const Matrix d = ob::pairwise_distances(p, p);
    EXPECT_NEAR(d(0, 0), kSelfFloor, 1e-15);
    EXPECT_NEAR(d(0, 1), std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(d(0, 2), std::numbers::pi - kSelfFloor, 1e-13);
}

TEST(PairwiseDistances, RequiresUnitRows) {
    EXPECT_THROW(ob::pairwise_distances(Matrix::from_rows({{2, 0}}), Matrix::from_rows({{1, 0}})),
                 ob::ManifoldError);
}

TEST(PairwiseDistances, TriangleInequality) {
    geoattn::Rng rng(9);
    for (int t = 0; t < 200; ++t) {
        const Matrix pts = rng.unit_rows(3, 4);
        const Matrix d = ob::pairwise_distances(pts, pts);
        EXPECT_LE(d(0, 2), d(0, 1) + d(1, 2) + 1e-9);
    }
}

TEST(TangentProject, OrthogonalAndShrinking) {
    geoattn::Rng rng(12);
    for (int t = 0; t < 200; ++t) {
        const auto w = ob::project(rng.gaussian(5, 3)).point;
        const Matrix g = rng.gaussian(5, 3);
        const auto xi = ob::tangent_project(w, g);
        EXPECT_LE(ob::tangency_residual(xi), 1e-12);
        EXPECT_LE(geoattn::frobenius_norm(xi.delta), geoattn::frobenius_norm(g));
    }
}

TEST(TangentProject, NormalGradientVanishes) {
    const auto w = ob::project(Matrix::from_rows({{0.6}, {0.8}})).point;
    const auto xi = ob::tangent_project(w, Matrix::from_rows({{3.0}, {4.0}}));
    EXPECT_NEAR(geoattn::frobenius_norm(xi.delta), 0.0, 1e-15);
}

TEST(Retract, StaysOnManifoldAndZeroStepIsIdentity) {
    geoattn::Rng rng(13);
    const auto w = ob::project(rng.gaussian(4, 2)).point;
    const auto xi = ob::tangent_project(w, rng.gaussian(4, 2));
    EXPECT_LE(geoattn::max_abs_diff(ob::retract(xi, 0.0).matrix(), w.matrix()), 1e-15);
    for (double n : geoattn::col_norms(ob::retract(xi, 3.7).matrix())) EXPECT_NEAR(n, 1.0, 1e-12);
}

TEST(DistanceGradient, ClippedMagnitudeAtCoincidence) {
    // |k| / sqrt(2 eps - eps^2) at eps = 1e-4.
    const geoattn::Vector q{1.0, 0.0, 0.0};
    const auto g = ob::distance_gradient(q, q);
    EXPECT_NEAR(geoattn::norm(g), 70.712445951901742, 1e-9);
}

TEST(DistanceGradient, OrthogonalPair) {
    const auto g = ob::distance_gradient({1.0, 0.0}, {0.0, 1.0});
    EXPECT_EQ(g, (geoattn::Vector{-0.0, -1.0}));
}
