#pragma once

// Independent numerical oracles for the test suites.
//
// Nothing in this header calls into the oblique, lorentz or attention
// kernels. Matrix is used only as a container; every quantity is recomputed
// with plain scalar loops so that agreement with the kernels is evidence
// rather than tautology.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoattn/attention.hpp"  // AttentionConfig only
#include "geoattn/linalg.hpp"

namespace geoattn::diffcheck {

struct FDConfig {
    double step = 1e-6;
    double tolerance = 1e-5;

    void validate() const {
        if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
        if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    }
};

class NonFiniteEvaluation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Central differences g_i = (f(x + h e_i) - f(x - h e_i)) / 2h.
inline std::vector<double> finite_diff_gradient(const std::function<double(const std::vector<double>&)>& f,
                                                const std::vector<double>& x,
                                                const FDConfig& cfg = {}) {
    cfg.validate();
    std::vector<double> g(x.size());
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + cfg.step;
        const double fp = f(probe);
        probe[i] = x[i] - cfg.step;
        const double fm = f(probe);
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NonFiniteEvaluation("non-finite function value when perturbing coordinate " +
                                      std::to_string(i));
        }
        g[i] = (fp - fm) / (2.0 * cfg.step);
    }
    return g;
}

/// |a - b| / max(|a|, |b|), or 0 when both are below 1e-12.
inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("relative_error: length mismatch");
    double diff = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    const double denom = std::sqrt(std::max(na, nb));
    if (denom < 1e-12) return std::sqrt(diff);
    return std::sqrt(diff) / denom;
}

enum class Space { oblique, lorentz };

inline constexpr std::size_t kReferenceCap = 256;

namespace scalar {

inline double oblique_dist(const std::vector<double>& a, const std::vector<double>& b, double eps) {
    double c = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) c += a[t] * b[t];
    if (c > 1.0 - eps) c = 1.0 - eps;
    if (c < -1.0 + eps) c = -1.0 + eps;
    return std::acos(c);
}

inline std::vector<double> unit(std::vector<double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    s = std::sqrt(s);
    if (s < 1e-12) {
        for (double& x : a) x = 0.0;
        if (!a.empty()) a[0] = 1.0;
        return a;
    }
    for (double& x : a) x /= s;
    return a;
}

// Returns {space..., time} for the hyperboloid point exp_O(alpha * a).
inline std::vector<double> lift(const std::vector<double>& a, double alpha, double c) {
    double r2 = 0.0;
    for (double x : a) r2 += (alpha * x) * (alpha * x);
    const double arg = std::sqrt(c) * std::sqrt(r2);
    const double f = arg < 1e-4 ? 1.0 + arg * arg / 6.0 + arg * arg * arg * arg / 120.0
                                : std::sinh(arg) / arg;
    std::vector<double> p(a.size() + 1);
    double s2 = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        p[t] = f * alpha * a[t];
        s2 += p[t] * p[t];
    }
    p[a.size()] = std::sqrt(1.0 / c + s2);
    return p;
}

inline double lorentz_dist(const std::vector<double>& x, const std::vector<double>& y, double c,
                           double eps) {
    const std::size_t n = x.size() - 1;
    double inner = 0.0;
    for (std::size_t t = 0; t < n; ++t) inner += x[t] * y[t];
    inner -= x[n] * y[n];
    double z = -c * inner;
    if (z < 1.0 + eps) z = 1.0 + eps;
    return std::acosh(z) / std::sqrt(c);
}

}  // namespace scalar

/// Triple-loop transliteration of both attention kernels. Per head, per
/// query row: compute every distance, form the logits, softmax with the
/// row maximum subtracted, then accumulate weights times values.
inline Matrix naive_attention_reference(const Matrix& q, const Matrix& k, const Matrix& v,
                                        Space space, const AttentionConfig& cfg,
                                        const Matrix* mask = nullptr) {
    if (q.rows() > kReferenceCap || k.rows() > kReferenceCap) {
        throw std::length_error("naive reference is capped at " + std::to_string(kReferenceCap) +
                                " rows per operand");
    }
    if (q.cols() != k.cols() || v.rows() != k.rows())
        throw DimensionError("naive reference: inconsistent q/k/v shapes");
    if (cfg.heads == 0 || q.cols() % cfg.heads || v.cols() % cfg.heads)
        throw ConfigError("naive reference: dims not divisible by heads");

    const std::size_t n = q.rows(), m = k.rows(), H = cfg.heads;
    const std::size_t hq = q.cols() / H, hv = v.cols() / H;
    const double alpha = cfg.lorentz_scale ? *cfg.lorentz_scale
                                           : 1.0 / std::sqrt(static_cast<double>(q.cols()));
    Matrix out(n, v.cols());

    for (std::size_t h = 0; h < H; ++h) {
        std::vector<std::vector<double>> qp(n), kp(m);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row(hq);
            for (std::size_t t = 0; t < hq; ++t) row[t] = q(i, h * hq + t);
            qp[i] = space == Space::oblique ? scalar::unit(row)
                                            : scalar::lift(row, alpha, cfg.curvature);
        }
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> row(hq);
            for (std::size_t t = 0; t < hq; ++t) row[t] = k(j, h * hq + t);
            kp[j] = space == Space::oblique ? scalar::unit(row)
                                            : scalar::lift(row, alpha, cfg.curvature);
        }
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> logit(m);
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < m; ++j) {
                double l;
                if (space == Space::oblique) {
                    l = -scalar::oblique_dist(qp[i], kp[j], cfg.eps_oblique) / cfg.tau_obl;
                } else {
                    l = std::exp(-scalar::lorentz_dist(qp[i], kp[j], cfg.curvature,
                                                       cfg.eps_lorentz) /
                                 cfg.tau_lor);
                }
                if (mask) l += (*mask)(i, j);
                logit[j] = l;
                if (l > mx) mx = l;
            }
            double z = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                logit[j] = std::exp(logit[j] - mx);
                z += logit[j];
            }
            for (std::size_t t = 0; t < hv; ++t) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m; ++j) acc += (logit[j] / z) * v(j, h * hv + t);
                out(i, h * hv + t) = acc;
            }
        }
    }
    return out;
}

}  // namespace geoattn::diffcheck
