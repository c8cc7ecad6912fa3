#pragma once

// Geodesic attention kernels.
//
// Both kernels replace the dot-product score with a geodesic distance:
//   oblique  A = softmax(-D / tau_obl),        D_ij = arccos(clip(q_i . k_j))
//   lorentz  A = softmax(exp(-D / tau_lor)),   D_ij = d_L(exp_O(q_i), exp_O(k_j))
// and return A v. Queries and keys are split into heads; each head slice is
// re-projected (oblique) or re-lifted (lorentz) on its own, so every head has
// its own distance matrix. Values stay Euclidean.
//
// The lorentz weight is a double exponential, softmax(exp(-D/tau)), not
// softmax(-D/tau). Since exp(-D/tau) lies in (0, 1], the logits span at most
// one unit and the resulting weights are much flatter than softmax(-D/tau).

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoattn/linalg.hpp"
#include "geoattn/lorentz.hpp"
#include "geoattn/oblique.hpp"

namespace geoattn {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct AttentionConfig {
    std::size_t heads = 4;
    double tau_obl = 1.0;
    double tau_lor = 0.1;
    double curvature = 1.0;
    double eps_oblique = oblique::kDefaultClip;
    double eps_lorentz = lorentz::kDefaultClip;
    /// Tangent scale alpha for the lorentz lift; 1/sqrt(d) when unset.
    std::optional<double> lorentz_scale;

    void validate() const {
        if (heads < 1) throw ConfigError("heads must be >= 1");
        if (!(tau_obl > 0.0)) throw ConfigError("tau_obl must be > 0");
        if (!(tau_lor > 0.0)) throw ConfigError("tau_lor must be > 0");
        if (!(eps_oblique >= 0.0 && eps_oblique < 1.0))
            throw ConfigError("eps_oblique must lie in [0, 1)");
        if (!(eps_lorentz >= 0.0)) throw ConfigError("eps_lorentz must be >= 0");
        if (lorentz_scale && !(*lorentz_scale > 0.0))
            throw ConfigError("lorentz_scale must be > 0");
        (void)lorentz::Curvature(curvature);
    }

    std::size_t head_dim(std::size_t d, const char* what) const {
        if (d % heads != 0) {
            throw ConfigError(std::string(what) + " dim " + std::to_string(d) +
                              " is not divisible by " + std::to_string(heads) + " heads");
        }
        return d / heads;
    }

    double scale_for(std::size_t d) const {
        return lorentz_scale.value_or(lorentz::TangentAtOrigin::default_scale(d));
    }
};

/// 3D Fourier features: for each coordinate a and frequency 2^j,
/// [sin(2^j x_a), cos(2^j x_a)], coordinate-major. The natural width is
/// 6 * num_freqs; narrower `out_dim` truncates, wider pads with zeros.
inline Matrix fourier_pe(const Matrix& pos, std::size_t num_freqs, std::size_t out_dim) {
    if (pos.cols() != 3) throw DimensionError("fourier_pe: positions must be n x 3, got " + pos.shape());
    Matrix out(pos.rows(), out_dim);
    for (std::size_t i = 0; i < pos.rows(); ++i) {
        std::size_t col = 0;
        for (std::size_t a = 0; a < 3 && col < out_dim; ++a) {
            for (std::size_t j = 0; j < num_freqs && col < out_dim; ++j) {
                const double arg = std::ldexp(pos(i, a), static_cast<int>(j));
                out(i, col++) = std::sin(arg);
                if (col < out_dim) out(i, col++) = std::cos(arg);
            }
        }
    }
    return out;
}

/// Caller-supplied embedding Emb(X, Pos) with a declared output width.
struct EmbedFn {
    std::size_t out_dim;
    std::function<Matrix(const Matrix& x, const Matrix& pos)> fn;

    Matrix operator()(const Matrix& x, const Matrix& pos) const {
        Matrix e = fn(x, pos);
        if (e.rows() != x.rows() || e.cols() != out_dim) {
            throw DimensionError("embedding returned " + e.shape() + ", declared " +
                                 shape_str(x.rows(), out_dim));
        }
        return e;
    }
};

/// X + PE(Pos), with the encoding sized to X's width.
inline EmbedFn additive_fourier_embedding(std::size_t d, std::size_t num_freqs = 4) {
    return EmbedFn{d, [d, num_freqs](const Matrix& x, const Matrix& pos) {
                       return x + fourier_pe(pos, num_freqs, d);
                   }};
}

/// [X, PE(Pos)]: features followed by the full 6 * num_freqs encoding.
inline EmbedFn concat_fourier_embedding(std::size_t d, std::size_t num_freqs = 4) {
    const std::size_t width = d + 6 * num_freqs;
    return EmbedFn{width, [d, num_freqs, width](const Matrix& x, const Matrix& pos) {
                       if (x.cols() != d) {
                           throw DimensionError("embedding expects " + std::to_string(d) +
                                                " features, got " + x.shape());
                       }
                       const Matrix pe = fourier_pe(pos, num_freqs, 6 * num_freqs);
                       Matrix out(x.rows(), width);
                       write_col_slice(out, 0, x);
                       write_col_slice(out, d, pe);
                       return out;
                   }};
}

namespace detail {

inline void check_qkv(const Matrix& q, const Matrix& k, const Matrix& v) {
    if (q.cols() != k.cols()) {
        throw DimensionError("query " + q.shape() + " and key " + k.shape() +
                             " feature dims differ");
    }
    if (v.rows() != k.rows()) {
        throw DimensionError("value " + v.shape() + " and key " + k.shape() +
                             " row counts differ");
    }
}

inline void check_mask(const Matrix* mask, std::size_t n, std::size_t m) {
    if (mask && (mask->rows() != n || mask->cols() != m)) {
        throw DimensionError("mask " + mask->shape() + " does not match scores " +
                             shape_str(n, m));
    }
}

inline Matrix apply_mask(Matrix logits, const Matrix* mask) {
    if (mask) logits = logits + *mask;
    return logits;
}

inline std::vector<lorentz::LorentzPoint> lift_rows(const Matrix& m, double scale,
                                                    lorentz::Curvature c) {
    std::vector<lorentz::LorentzPoint> pts;
    pts.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        pts.push_back(lorentz::exp_origin(lorentz::TangentAtOrigin(m.row(i), scale), c));
    return pts;
}

}  // namespace detail

/// softmax(-D / tau_obl), plus an optional additive mask.
inline Matrix oblique_weights_from_distances(const Matrix& d, const AttentionConfig& cfg,
                                             const Matrix* mask = nullptr) {
    detail::check_mask(mask, d.rows(), d.cols());
    return softmax_rows(detail::apply_mask((-1.0 / cfg.tau_obl) * d, mask));
}

/// softmax(exp(-D / tau_lor)), plus an optional additive mask.
inline Matrix lorentz_weights_from_distances(const Matrix& d, const AttentionConfig& cfg,
                                             const Matrix* mask = nullptr) {
    detail::check_mask(mask, d.rows(), d.cols());
    Matrix logits(d.rows(), d.cols());
    for (std::size_t i = 0; i < d.size(); ++i)
        logits.data()[i] = std::exp(-d.data()[i] / cfg.tau_lor);
    return softmax_rows(detail::apply_mask(std::move(logits), mask));
}

/// Oblique weights for one head; rows of q and k are projected onto the unit
/// sphere first.
inline Matrix oblique_weights(const Matrix& q, const Matrix& k, const AttentionConfig& cfg,
                              const Matrix* mask = nullptr) {
    const Matrix d = oblique::pairwise_distances(oblique::project_rows(q),
                                                 oblique::project_rows(k), cfg.eps_oblique);
    return oblique_weights_from_distances(d, cfg, mask);
}

/// Lorentz weights for one head; rows of q and k are lifted through exp_O
/// with tangent scale `scale`.
inline Matrix lorentz_weights(const Matrix& q, const Matrix& k, const AttentionConfig& cfg,
                              double scale, const Matrix* mask = nullptr) {
    const lorentz::Curvature c(cfg.curvature);
    const Matrix d = lorentz::pairwise_distances(detail::lift_rows(q, scale, c),
                                                 detail::lift_rows(k, scale, c), c,
                                                 cfg.eps_lorentz);
    return lorentz_weights_from_distances(d, cfg, mask);
}

namespace detail {

template <typename WeightFn>
Matrix multi_head(const Matrix& q, const Matrix& k, const Matrix& v, const AttentionConfig& cfg,
                  WeightFn&& weights) {
    cfg.validate();
    check_qkv(q, k, v);
    const std::size_t hq = cfg.head_dim(q.cols(), "query/key");
    const std::size_t hv = cfg.head_dim(v.cols(), "value");
    Matrix out(q.rows(), v.cols());
    for (std::size_t h = 0; h < cfg.heads; ++h) {
        const Matrix a = weights(col_slice(q, h * hq, hq), col_slice(k, h * hq, hq));
        write_col_slice(out, h * hv, matmul(a, col_slice(v, h * hv, hv)));
    }
    return out;
}

}  // namespace detail

/// Geodesic oblique attention on explicit q, k, v.
inline Matrix oblique_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                const AttentionConfig& cfg, const Matrix* mask = nullptr) {
    return detail::multi_head(q, k, v, cfg, [&](const Matrix& qh, const Matrix& kh) {
        return oblique_weights(qh, kh, cfg, mask);
    });
}

/// Self attention over tokens x with positions pos: q = k = Emb(x, pos)
/// projected row-wise onto the sphere, v = x. With tau_obl = 1 the weights are
/// exactly softmax(-D).
inline Matrix oblique_self_attention(const Matrix& x, const Matrix& pos, const EmbedFn& emb,
                                     const AttentionConfig& cfg, const Matrix* mask = nullptr) {
    if (pos.rows() != x.rows()) {
        throw DimensionError("positions " + pos.shape() + " do not match tokens " + x.shape());
    }
    const Matrix e = emb(x, pos);
    return oblique_attention(e, e, x, cfg, mask);
}

/// Lorentz geodesic cross attention: q and k rows lifted onto the hyperboloid,
/// values left Euclidean.
inline Matrix lorentz_cross_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                      const AttentionConfig& cfg, const Matrix* mask = nullptr) {
    const double scale = cfg.scale_for(q.cols());
    return detail::multi_head(q, k, v, cfg, [&](const Matrix& qh, const Matrix& kh) {
        return lorentz_weights(qh, kh, cfg, scale, mask);
    });
}

/// Applies a kernel independently to every slice of a batch axis.
template <typename Kernel>
std::vector<Matrix> over_batch(std::span<const Matrix> q, std::span<const Matrix> k,
                               std::span<const Matrix> v, Kernel&& kernel) {
    if (q.size() != k.size() || k.size() != v.size())
        throw DimensionError("batch sizes of q, k, v differ");
    std::vector<Matrix> out;
    out.reserve(q.size());
    for (std::size_t b = 0; b < q.size(); ++b) out.push_back(kernel(q[b], k[b], v[b]));
    return out;
}

/// Object-aware context (instance queries context) and context-aware object
/// (context queries instance).
struct BidirectionalOutput {
    Matrix oac;
    Matrix cao;
};

inline BidirectionalOutput bidirectional_attention(const Matrix& instance, const Matrix& context,
                                                   const AttentionConfig& cfg) {
    if (instance.cols() != context.cols()) {
        throw DimensionError("instance " + instance.shape() + " and context " + context.shape() +
                             " feature dims differ");
    }
    return {lorentz_cross_attention(instance, context, context, cfg),
            lorentz_cross_attention(context, instance, instance, cfg)};
}

/// Multi-slice context (one matrix per decoupled context stream). OAC attends
/// over the rows of all slices together; CAO is computed per slice and
/// mean-pooled over the slice axis.
inline BidirectionalOutput bidirectional_attention(const Matrix& instance,
                                                   std::span<const Matrix> context_slices,
                                                   const AttentionConfig& cfg) {
    if (context_slices.empty()) throw DimensionError("bidirectional_attention: no context slices");
    Matrix all = context_slices.front();
    for (std::size_t s = 1; s < context_slices.size(); ++s) all = vstack(all, context_slices[s]);
    if (instance.cols() != all.cols()) {
        throw DimensionError("instance " + instance.shape() + " and context " + all.shape() +
                             " feature dims differ");
    }
    Matrix oac = lorentz_cross_attention(instance, all, all, cfg);
    Matrix cao;
    for (const Matrix& ctx : context_slices) {
        if (ctx.rows() != context_slices.front().rows()) {
            throw DimensionError("context slices must share a row count to be pooled");
        }
        Matrix one = lorentz_cross_attention(ctx, instance, instance, cfg);
        cao = cao.empty() ? std::move(one) : cao + one;
    }
    cao = (1.0 / static_cast<double>(context_slices.size())) * cao;
    return {std::move(oac), std::move(cao)};
}

/// Scaled dot-product attention, softmax(q k^T / sqrt(head_dim)) v per head.
/// Baseline for benchmarks.
inline Matrix euclidean_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                                  const AttentionConfig& cfg, const Matrix* mask = nullptr) {
    return detail::multi_head(q, k, v, cfg, [&](const Matrix& qh, const Matrix& kh) {
        Matrix s = matmul(qh, transpose(kh));
        const double inv = 1.0 / std::sqrt(static_cast<double>(qh.cols()));
        for (double& x : s.data()) x *= inv;
        detail::check_mask(mask, s.rows(), s.cols());
        return softmax_rows(detail::apply_mask(std::move(s), mask));
    });
}

}  // namespace geoattn
