#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "geoattn/attention.hpp"
#include "geoattn/diffcheck.hpp"
#include "geoattn/random.hpp"

using geoattn::AttentionConfig;
using geoattn::Matrix;

namespace {

AttentionConfig single_head() {
    AttentionConfig cfg;
    cfg.heads = 1;
    return cfg;
}

double row_sum(const Matrix& a, std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j);
    return s;
}

}  // namespace

TEST(Config, Validation) {
    AttentionConfig cfg;
    cfg.heads = 0;
    EXPECT_THROW(cfg.validate(), geoattn::ConfigError);
    cfg = {};
    cfg.tau_lor = 0.0;
    EXPECT_THROW(cfg.validate(), geoattn::ConfigError);
    cfg = {};
    cfg.curvature = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    EXPECT_THROW(cfg.head_dim(10, "feature"), geoattn::ConfigError);
    EXPECT_EQ(cfg.head_dim(256, "feature"), 64u);
    EXPECT_DOUBLE_EQ(cfg.scale_for(16), 0.25);
    cfg.lorentz_scale = 2.0;
    EXPECT_DOUBLE_EQ(cfg.scale_for(16), 2.0);
}

TEST(ObliqueWeights, TwoOrthogonalRows) {
    // D = [[arccos(1 - 1e-4), pi/2], [pi/2, arccos(1 - 1e-4)]], A = softmax(-D).
    const Matrix q = Matrix::identity(2);
    const Matrix a = geoattn::oblique_weights(q, q, single_head());
    EXPECT_NEAR(a(0, 0), 0.82587270989545544, 1e-15);
    EXPECT_NEAR(a(0, 1), 0.17412729010454456, 1e-15);
    EXPECT_NEAR(a(1, 1), a(0, 0), 0.0);
}

TEST(ObliqueAttention, OutputIsWeightedValues) {
    const Matrix q = Matrix::identity(2);
    const Matrix v = Matrix::from_rows({{1.0}, {0.0}});
    const Matrix out = geoattn::oblique_attention(q, q, v, single_head());
    EXPECT_NEAR(out(0, 0), 0.82587270989545544, 1e-15);
    EXPECT_NEAR(out(1, 0), 0.17412729010454456, 1e-15);
}

TEST(ObliqueAttention, TemperatureSharpens) {
    AttentionConfig cold = single_head();
    cold.tau_obl = 0.1;
    const Matrix q = Matrix::identity(2);
    EXPECT_GT(geoattn::oblique_weights(q, q, cold)(0, 0),
              geoattn::oblique_weights(q, q, single_head())(0, 0));
}

TEST(LorentzWeights, TwoPointExample) {
    // Lifts of +-0.5 with alpha = 1 at c = 1 are at distance 1; the diagonal
    // sits at the clip floor. A = softmax(exp(-D)).
    AttentionConfig cfg = single_head();
    cfg.tau_lor = 1.0;
    cfg.lorentz_scale = 1.0;
    const Matrix q = Matrix::from_rows({{0.5}, {-0.5}});
    const Matrix v = Matrix::from_rows({{1.0}, {0.0}});
    const Matrix a = geoattn::lorentz_weights(q, q, cfg, 1.0);
    EXPECT_NEAR(a(0, 0), 0.65297012617870616, 1e-15);
    EXPECT_NEAR(a(0, 1), 0.34702987382129384, 1e-15);
    const Matrix out = geoattn::lorentz_cross_attention(q, q, v, cfg);
    EXPECT_NEAR(out(0, 0), 0.65297012617870616, 1e-15);
    EXPECT_NEAR(out(1, 0), 0.34702987382129384, 1e-15);
}

TEST(LorentzAttention, CoincidentKeysGiveColumnMean) {
    const Matrix q = Matrix::from_rows({{0.3, 0.1}, {-1.0, 2.0}});
    const Matrix k(3, 2);
    const Matrix v = Matrix::from_rows({{1, 4}, {2, 5}, {6, 0}});
    const Matrix out = geoattn::lorentz_cross_attention(q, k, v, single_head());
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(out(i, 0), 3.0, 1e-12);
        EXPECT_NEAR(out(i, 1), 3.0, 1e-12);
    }
}

TEST(Weights, RowsSumToOne) {
    geoattn::Rng rng(31);
    const AttentionConfig cfg;
    for (int t = 0; t < 20; ++t) {
        const Matrix q = rng.gaussian(7, 5), k = rng.gaussian(9, 5);
        const Matrix ao = geoattn::oblique_weights(q, k, cfg);
        const Matrix al = geoattn::lorentz_weights(q, k, cfg, cfg.scale_for(5));
        for (std::size_t i = 0; i < 7; ++i) {
            EXPECT_NEAR(row_sum(ao, i), 1.0, 1e-12);
            EXPECT_NEAR(row_sum(al, i), 1.0, 1e-12);
        }
    }
}

TEST(Weights, MonotoneInDistance) {
    const AttentionConfig cfg;
    const Matrix d = Matrix::from_rows({{0.1, 0.5, 2.0}});
    Matrix farther = d;
    farther(0, 1) = 0.9;
    EXPECT_LT(geoattn::oblique_weights_from_distances(farther, cfg)(0, 1),
              geoattn::oblique_weights_from_distances(d, cfg)(0, 1));
    EXPECT_LT(geoattn::lorentz_weights_from_distances(farther, cfg)(0, 1),
              geoattn::lorentz_weights_from_distances(d, cfg)(0, 1));
}

TEST(Mask, ExcludesKeys) {
    AttentionConfig cfg = single_head();
    const Matrix q = Matrix::identity(2);
    Matrix mask(2, 2);
    mask(0, 1) = -std::numeric_limits<double>::infinity();
    const Matrix a = geoattn::oblique_weights(q, q, cfg, &mask);
    EXPECT_EQ(a(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(a(0, 0), 1.0);
    EXPECT_NEAR(a(1, 0) + a(1, 1), 1.0, 1e-15);
    Matrix bad(1, 2);
    EXPECT_THROW(geoattn::oblique_weights(q, q, cfg, &bad), geoattn::DimensionError);
}

TEST(MultiHead, HeadsAreIndependent) {
    geoattn::Rng rng(41);
    AttentionConfig cfg;
    cfg.heads = 2;
    const Matrix q = rng.gaussian(4, 6), k = rng.gaussian(5, 6), v = rng.gaussian(5, 4);
    const Matrix out = geoattn::oblique_attention(q, k, v, cfg);
    const AttentionConfig one = single_head();
    for (std::size_t h = 0; h < 2; ++h) {
        const Matrix expect = geoattn::oblique_attention(geoattn::col_slice(q, 3 * h, 3),
                                                         geoattn::col_slice(k, 3 * h, 3),
                                                         geoattn::col_slice(v, 2 * h, 2), one);
        EXPECT_LE(geoattn::max_abs_diff(geoattn::col_slice(out, 2 * h, 2), expect), 0.0);
    }
}

TEST(MultiHead, RejectsIndivisibleDims) {
    const AttentionConfig cfg;
    EXPECT_THROW(geoattn::oblique_attention(Matrix(2, 6), Matrix(2, 6), Matrix(2, 8), cfg),
                 geoattn::ConfigError);
    EXPECT_THROW(geoattn::lorentz_cross_attention(Matrix(2, 8), Matrix(3, 8), Matrix(2, 8), cfg),
                 geoattn::DimensionError);
}

TEST(Kernels, MatchScalarReference) {
    geoattn::Rng rng(51);
    for (std::size_t heads : {1u, 4u}) {
        AttentionConfig cfg;
        cfg.heads = heads;
        const Matrix q = rng.gaussian(17, 8), k = rng.gaussian(23, 8), v = rng.gaussian(23, 12);
        EXPECT_LE(geoattn::max_abs_diff(geoattn::oblique_attention(q, k, v, cfg),
                                        geoattn::diffcheck::naive_attention_reference(
                                            q, k, v, geoattn::diffcheck::Space::oblique, cfg)),
                  1e-12);
        EXPECT_LE(geoattn::max_abs_diff(geoattn::lorentz_cross_attention(q, k, v, cfg),
                                        geoattn::diffcheck::naive_attention_reference(
                                            q, k, v, geoattn::diffcheck::Space::lorentz, cfg)),
                  1e-12);
    }
}

TEST(Kernels, FiniteOnCoincidentAndAntipodalRows) {
    Matrix q = Matrix::from_rows({{1, 2, 3, 4}, {1, 2, 3, 4}, {-1, -2, -3, -4}, {0, 0, 0, 0}});
    const Matrix v = Matrix::from_rows({{1, 0}, {0, 1}, {1, 1}, {2, 2}});
    const AttentionConfig cfg = single_head();
    EXPECT_TRUE(geoattn::oblique_attention(q, q, v, cfg).all_finite());
    EXPECT_TRUE(geoattn::lorentz_cross_attention(q, q, v, cfg).all_finite());
}

TEST(FourierPe, LayoutAndWidth) {
    const Matrix pos = Matrix::from_rows({{0.5, 0.0, 0.0}});
    const Matrix pe = geoattn::fourier_pe(pos, 2, 12);
    EXPECT_NEAR(pe(0, 0), 0.47942553860420300, 1e-16);
    EXPECT_NEAR(pe(0, 1), 0.87758256189037272, 1e-16);
    EXPECT_NEAR(pe(0, 2), 0.84147098480789651, 1e-16);
    EXPECT_NEAR(pe(0, 3), 0.54030230586813972, 1e-16);
    EXPECT_EQ(pe(0, 4), 0.0);  // sin(0)
    EXPECT_EQ(pe(0, 5), 1.0);  // cos(0)
    const Matrix padded = geoattn::fourier_pe(pos, 2, 14);
    EXPECT_EQ(padded(0, 13), 0.0);
    EXPECT_EQ(geoattn::fourier_pe(pos, 2, 3).cols(), 3u);
    EXPECT_THROW(geoattn::fourier_pe(Matrix(1, 2), 2, 4), geoattn::DimensionError);
}

TEST(SelfAttention, UsesEmbeddedQueriesAndRawValues) {
    geoattn::Rng rng(61);
    const Matrix x = rng.gaussian(5, 8), pos = rng.gaussian(5, 3);
    const auto emb = geoattn::additive_fourier_embedding(8);
    AttentionConfig cfg;
    cfg.heads = 2;
    const Matrix e = emb(x, pos);
    EXPECT_EQ(geoattn::oblique_self_attention(x, pos, emb, cfg),
              geoattn::oblique_attention(e, e, x, cfg));
    EXPECT_THROW(geoattn::oblique_self_attention(x, Matrix(4, 3), emb, cfg), geoattn::DimensionError);
}

TEST(EmbedFn, ConcatenatedEncoding) {
    geoattn::Rng rng(62);
    const Matrix x = rng.gaussian(3, 8), pos = rng.gaussian(3, 3);
    const auto emb = geoattn::concat_fourier_embedding(8, 2);
    const Matrix e = emb(x, pos);
    ASSERT_EQ(e.cols(), 20u);
    EXPECT_EQ(geoattn::col_slice(e, 0, 8), x);
    EXPECT_EQ(geoattn::col_slice(e, 8, 12), geoattn::fourier_pe(pos, 2, 12));
    AttentionConfig cfg;
    cfg.heads = 4;
    EXPECT_EQ(geoattn::oblique_self_attention(x, pos, emb, cfg).cols(), 8u);
}

TEST(EmbedFn, DeclaredWidthEnforced) {
    const geoattn::EmbedFn bad{4, [](const Matrix& x, const Matrix&) { return x; }};
    EXPECT_THROW(bad(Matrix(2, 3), Matrix(2, 3)), geoattn::DimensionError);
}

TEST(Bidirectional, DirectionsMatchCrossAttention) {
    geoattn::Rng rng(71);
    const AttentionConfig cfg;
    const Matrix inst = rng.gaussian(3, 8), ctx = rng.gaussian(6, 8);
    const auto out = geoattn::bidirectional_attention(inst, ctx, cfg);
    EXPECT_EQ(out.oac, geoattn::lorentz_cross_attention(inst, ctx, ctx, cfg));
    EXPECT_EQ(out.cao, geoattn::lorentz_cross_attention(ctx, inst, inst, cfg));
    EXPECT_EQ(out.oac.rows(), 3u);
    EXPECT_EQ(out.cao.rows(), 6u);
}

TEST(Bidirectional, MultiSlice) {
    geoattn::Rng rng(72);
    const AttentionConfig cfg;
    const Matrix inst = rng.gaussian(3, 8);
    const std::array<Matrix, 2> slices{rng.gaussian(4, 8), rng.gaussian(4, 8)};
    const auto out = geoattn::bidirectional_attention(inst, std::span<const Matrix>(slices), cfg);
    const Matrix all = geoattn::vstack(slices[0], slices[1]);
    EXPECT_EQ(out.oac, geoattn::lorentz_cross_attention(inst, all, all, cfg));
    const Matrix mean =
        0.5 * (geoattn::lorentz_cross_attention(slices[0], inst, inst, cfg) +
               geoattn::lorentz_cross_attention(slices[1], inst, inst, cfg));
    EXPECT_LE(geoattn::max_abs_diff(out.cao, mean), 1e-15);
    EXPECT_THROW(geoattn::bidirectional_attention(inst, std::span<const Matrix>(), cfg),
                 geoattn::DimensionError);
}

TEST(OverBatch, AppliesKernelPerSlice) {
    geoattn::Rng rng(81);
    const AttentionConfig cfg;
    const std::vector<Matrix> q{rng.gaussian(2, 4), rng.gaussian(3, 4)};
    const std::vector<Matrix> k{rng.gaussian(5, 4), rng.gaussian(2, 4)};
    const std::vector<Matrix> v{rng.gaussian(5, 4), rng.gaussian(2, 4)};
    const auto out = geoattn::over_batch(q, k, v, [&](const Matrix& a, const Matrix& b, const Matrix& c) {
        return geoattn::lorentz_cross_attention(a, b, c, cfg);
    });
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[1], geoattn::lorentz_cross_attention(q[1], k[1], v[1], cfg));
}

TEST(EuclideanAttention, UniformForZeroScores) {
    const Matrix q(2, 4), k(3, 4);
    const Matrix v = Matrix::from_rows({{3, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 3}});
    const Matrix out = geoattn::euclidean_attention(q, k, v, AttentionConfig{});
    EXPECT_DOUBLE_EQ(out(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(out(1, 3), 1.0);
}
