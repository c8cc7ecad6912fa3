#pragma once

// Runtime property suite behind `geoattn verify`. Each entry measures one
// invariant over a seeded random sweep and reports the worst value seen
// against its bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "geoattn/attention.hpp"
#include "geoattn/diffcheck.hpp"
#include "geoattn/experiments.hpp"
#include "geoattn/linalg.hpp"
#include "geoattn/lorentz.hpp"
#include "geoattn/oblique.hpp"
#include "geoattn/random.hpp"

namespace geoattn::verify {

struct Options {
    std::uint64_t seed = 0;
    /// Clip epsilons and kernel settings under test; overriding them is how
    /// fault injection is exercised.
    AttentionConfig attention{};
};

struct Result {
    std::string module;
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct Property {
    std::string module;
    std::string name;
    std::function<Result(const Options&)> run;
};

namespace detail {

inline Result upper(double measured, double bound, std::string detail = {}) {
    return Result{{}, {}, measured <= bound, measured, bound, std::move(detail)};
}

inline Matrix permute_rows(const Matrix& m, const std::vector<std::size_t>& perm) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) out.set_row(i, m.row(perm[i]));
    return out;
}

inline std::vector<std::size_t> random_perm(Rng& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng.engine());
    return p;
}

inline constexpr double kSweepCurvatures[] = {0.5, 1.0, 2.0};

inline double lorentz_floor(double c, double eps) { return std::acosh(1.0 + eps) / std::sqrt(c); }

// --- core-linalg -----------------------------------------------------------

inline Result matmul_associativity(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t a = 1 + rng.index(8), b = 1 + rng.index(8), c = 1 + rng.index(8),
                          d = 1 + rng.index(8);
        const Matrix x = rng.gaussian(a, b), y = rng.gaussian(b, c), z = rng.gaussian(c, d);
        const Matrix l = matmul(matmul(x, y), z), r = matmul(x, matmul(y, z));
        double scale = 0.0;
        for (double v : l.data()) scale = std::max(scale, std::abs(v));
        worst = std::max(worst, max_abs_diff(l, r) / std::max(scale, 1.0));
    }
    return upper(worst, 1e-10, "max relative error over 200 random triples");
}

inline Result softmax_sums(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        Matrix m(1, 1 + rng.index(64));
        for (double& x : m.data()) x = rng.uniform(-700.0, 700.0);
        const Matrix s = softmax_rows(m);
        double sum = 0.0;
        for (double x : s.data()) sum += x;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return upper(worst, 1e-12, "max |row sum - 1|, entries in [-700, 700]");
}

inline Result softmax_shift(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        Matrix m = rng.gaussian(1, 1 + rng.index(32));
        const double shift = rng.uniform(-100.0, 100.0);
        Matrix shifted = m;
        for (double& x : shifted.data()) x += shift;
        worst = std::max(worst, max_abs_diff(softmax_rows(m), softmax_rows(shifted)));
    }
    return upper(worst, 1e-12, "max entry change under a constant shift");
}

// --- oblique ---------------------------------------------------------------

inline Result project_unit_columns(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        Matrix m = rng.gaussian(1 + rng.index(16), 1 + rng.index(16));
        for (double& x : m.data()) x *= rng.log_uniform(1e-6, 1e6);
        for (double n : col_norms(oblique::project(m).point.matrix()))
            worst = std::max(worst, std::abs(n - 1.0));
    }
    return upper(worst, 1e-12, "max |column norm - 1| after project, entries scaled over 12 decades");
}

inline Result project_idempotent(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const Matrix m = rng.gaussian(1 + rng.index(16), 1 + rng.index(16));
        const Matrix p1 = oblique::project(m).point.matrix();
        const Matrix p2 = oblique::project(p1).point.matrix();
        worst = std::max(worst, max_abs_diff(p1, p2));
    }
    return upper(worst, 1e-15, "max entry change of project(project(m)) vs project(m)");
}

inline Result project_scale_invariance(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const Matrix m = rng.gaussian(1 + rng.index(16), 1 + rng.index(16));
        const double lambda = rng.log_uniform(1e-3, 1e3);
        worst = std::max(worst, max_abs_diff(oblique::project(m).point.matrix(),
                                              oblique::project(lambda * m).point.matrix()));
    }
    return upper(worst, 1e-12, "lambda log-uniform in [1e-3, 1e3]");
}

inline Result oblique_symmetry(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 1 + rng.index(16), g = 1 + rng.index(8);
        const auto q = oblique::project(rng.gaussian(n, g)).point;
        const auto k = oblique::project(rng.gaussian(n, g)).point;
        worst = std::max(worst, std::abs(oblique::geodesic_distance(q, k, o.attention.eps_oblique) -
                                         oblique::geodesic_distance(k, q, o.attention.eps_oblique)));
    }
    return upper(worst, 0.0, "d(Q,K) - d(K,Q), must be exactly 0");
}

inline Result oblique_triangle(const Options& o) {
    Rng rng(o.seed);
    const double eps = o.attention.eps_oblique;
    double worst = -std::numeric_limits<double>::infinity();
    int done = 0;
    while (done < 1000) {
        Matrix pts = rng.unit_rows(3, 3);
        const Matrix dots = matmul(pts, transpose(pts));
        if (std::abs(dots(0, 1)) >= 1 - eps || std::abs(dots(0, 2)) >= 1 - eps ||
            std::abs(dots(1, 2)) >= 1 - eps)
            continue;
        const Matrix d = oblique::pairwise_distances(pts, pts, eps);
        worst = std::max(worst, d(0, 2) - d(0, 1) - d(1, 2));
        ++done;
    }
    return upper(worst, 1e-9, "max d(a,c) - d(a,b) - d(b,c) over 1000 triples");
}

inline Result tangent_bound(const Options& o) {
    Rng rng(o.seed);
    double worst = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int t = 0; t < 10000; ++t) {
        const std::size_t n = 1 + rng.index(8), g = 1 + rng.index(8);
        const auto w = oblique::project(rng.gaussian(n, g)).point;
        const Matrix grad = rng.gaussian(n, g);
        const double excess =
            frobenius_norm(oblique::tangent_project(w, grad).delta) - frobenius_norm(grad);
        worst = std::max(worst, excess);
        if (excess > 0.0) ++violations;
    }
    return Result{{}, {}, violations == 0, worst, 0.0,
                  std::to_string(violations) + " violations of |Proj(G)|_F <= |G|_F in 10000 draws"};
}

inline Result oblique_clip_floor(const Options& o) {
    const double reference = std::acos(1.0 - oblique::kDefaultClip);
    Matrix p(1, 3);
    p(0, 0) = 1.0;
    const double self = oblique::pairwise_distances(p, p, o.attention.eps_oblique)(0, 0);
    const double rel = std::abs(self - reference) / reference;
    return upper(rel, 1e-6, "self-distance " + format_double(self) + " vs documented floor " +
                                format_double(reference) + " (relative error)");
}

// --- lorentz ---------------------------------------------------------------

inline Result hyperboloid_membership(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0, worst_rel = 0.0;
    int violations = 0;
    for (int t = 0; t < 10000; ++t) {
        const lorentz::Curvature c(rng.log_uniform(1e-3, 10.0));
        const auto x = lorentz::exp_origin(lorentz::TangentAtOrigin(rng.in_ball(3, 20.0)), c);
        const double r = lorentz::hyperboloid_residual(x, c);
        if (r > 1e-9) ++violations;
        worst = std::max(worst, r);
        worst_rel = std::max(worst_rel, r / (x.time() * x.time()));
    }
    return upper(worst, 1e-9,
                 std::to_string(violations) + "/10000 points exceed 1e-9; max residual/time^2 = " +
                     format_double(worst_rel));
}

inline Result exp_log_roundtrip(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const lorentz::Curvature c(kSweepCurvatures[t % 3]);
        const lorentz::TangentAtOrigin u(rng.in_ball(1 + rng.index(8), 10.0));
        const auto back = lorentz::log_origin(lorentz::exp_origin(u, c), c, u.scale);
        double e = 0.0;
        for (std::size_t i = 0; i < u.enc.size(); ++i)
            e += (back.enc[i] - u.enc[i]) * (back.enc[i] - u.enc[i]);
        worst = std::max(worst, std::sqrt(e));
    }
    return upper(worst, 1e-9, "max |log(exp(u)) - u|, |u| <= 10, c in {0.5, 1, 2}");
}

inline Result radial_isometry(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const lorentz::Curvature c(kSweepCurvatures[t % 3]);
        const lorentz::TangentAtOrigin u(rng.in_ball(1 + rng.index(8), 10.0));
        const auto x = lorentz::exp_origin(u, c);
        const double d =
            lorentz::geodesic_distance(lorentz::LorentzPoint::origin(x.dim(), c), x, c);
        worst = std::max(worst, std::abs(d - norm(u.effective())));
    }
    return upper(worst, 1e-9, "max |d(O, exp(u)) - |u||");
}

inline Result lorentz_metric_axioms(const Options& o) {
    Rng rng(o.seed);
    const lorentz::Curvature c(o.attention.curvature);
    double worst_sym = 0.0, worst_tri = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < 1000; ++t) {
        std::vector<lorentz::LorentzPoint> p;
        for (int k = 0; k < 3; ++k)
            p.push_back(lorentz::exp_origin(lorentz::TangentAtOrigin(rng.in_ball(3, 5.0)), c));
        const double ab = lorentz::geodesic_distance(p[0], p[1], c);
        const double ba = lorentz::geodesic_distance(p[1], p[0], c);
        const double bc = lorentz::geodesic_distance(p[1], p[2], c);
        const double ac = lorentz::geodesic_distance(p[0], p[2], c);
        worst_sym = std::max(worst_sym, std::abs(ab - ba));
        worst_tri = std::max(worst_tri, ac - ab - bc);
    }
    const double worst = std::max(worst_sym, worst_tri);
    return upper(worst, 1e-9,
                 "symmetry " + format_double(worst_sym) + ", triangle excess " +
                     format_double(worst_tri) + " over 1000 triples at radius <= 5");
}

inline Result curvature_scaling(const Options& o) {
    Rng rng(o.seed);
    const lorentz::Curvature one(1.0);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const lorentz::Curvature c(rng.uniform(0.25, 4.0));
        Vector a = rng.in_ball(3, 3.0), b = rng.in_ball(3, 3.0);
        const double dc = lorentz::geodesic_distance(
            lorentz::exp_origin(lorentz::TangentAtOrigin(a), c),
            lorentz::exp_origin(lorentz::TangentAtOrigin(b), c), c);
        for (double& x : a) x *= c.sqrt();
        for (double& x : b) x *= c.sqrt();
        const double d1 = lorentz::geodesic_distance(
            lorentz::exp_origin(lorentz::TangentAtOrigin(a), one),
            lorentz::exp_origin(lorentz::TangentAtOrigin(b), one), one);
        worst = std::max(worst, std::abs(dc - d1 / c.sqrt()));
    }
    return upper(worst, 1e-9, "max |d_c - d_1(sqrt(c) u, sqrt(c) w) / sqrt(c)|");
}

inline Result lorentz_clip_floor(const Options& o) {
    const double reference = lorentz_floor(1.0, lorentz::kDefaultClip);
    const lorentz::Curvature c(1.0);
    const auto x = lorentz::exp_origin(lorentz::TangentAtOrigin(Vector{0.3, -0.2}), c);
    const double self = lorentz::geodesic_distance(x, x, c, o.attention.eps_lorentz);
    const double rel = std::abs(self - reference) / reference;
    return upper(rel, 1e-6, "self-distance " + format_double(self) + " vs documented floor " +
                                format_double(reference) + " at c=1 (relative error)");
}

// --- geodesic-attention -----------------------------------------------------

inline Result weight_rows_sum(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const Matrix q = rng.gaussian(1 + rng.index(32), 8), k = rng.gaussian(1 + rng.index(32), 8);
        for (const Matrix& a : {oblique_weights(q, k, o.attention),
                                lorentz_weights(q, k, o.attention, o.attention.scale_for(8))}) {
            for (std::size_t i = 0; i < a.rows(); ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j);
                worst = std::max(worst, std::abs(s - 1.0));
            }
        }
    }
    return upper(worst, 1e-12, "max |row sum - 1| for both kernels");
}

inline Result permutation_equivariance(const Options& o) {
    Rng rng(o.seed);
    AttentionConfig cfg = o.attention;
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + rng.index(16), m = 2 + rng.index(16), d = 4 * cfg.heads;
        const Matrix q = rng.gaussian(n, d), k = rng.gaussian(m, d), v = rng.gaussian(m, d);
        const auto pq = random_perm(rng, n), pk = random_perm(rng, m);
        using Kernel = Matrix (*)(const Matrix&, const Matrix&, const Matrix&,
                                  const AttentionConfig&, const Matrix*);
        for (Kernel kern : {static_cast<Kernel>(oblique_attention),
                            static_cast<Kernel>(lorentz_cross_attention)}) {
            const Matrix base = kern(q, k, v, cfg, nullptr);
            worst = std::max(worst, max_abs_diff(permute_rows(base, pq),
                                                 kern(permute_rows(q, pq), k, v, cfg, nullptr)));
            worst = std::max(worst, max_abs_diff(base, kern(q, permute_rows(k, pk),
                                                            permute_rows(v, pk), cfg, nullptr)));
        }
    }
    return upper(worst, 1e-12, "query permutation and joint key/value permutation");
}

inline Result clip_safety(const Options& o) {
    AttentionConfig cfg = o.attention;
    cfg.heads = 1;
    Rng rng(o.seed);
    const Vector u = rng.unit(6);
    Matrix q(3, 6);
    q.set_row(0, u);
    q.set_row(1, u);
    Vector neg = u;
    for (double& x : neg) x = -x;
    q.set_row(2, neg);
    const Matrix v = rng.gaussian(3, 6);
    const bool finite = oblique_attention(q, q, v, cfg).all_finite() &&
                        lorentz_cross_attention(q, q, v, cfg).all_finite() &&
                        lorentz_cross_attention(Matrix(3, 6), Matrix(3, 6), v, cfg).all_finite();
    return Result{{}, {}, finite, finite ? 0.0 : 1.0, 0.0,
                  "coincident and antipodal rows produce finite outputs"};
}

inline Result oracle_equivalence(const Options& o) {
    Rng rng(o.seed);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        AttentionConfig cfg = o.attention;
        cfg.heads = (t % 2) ? 4 : 1;
        const std::size_t n = 1 + rng.index(64), m = 1 + rng.index(64), d = 8;
        const Matrix q = rng.gaussian(n, d), k = rng.gaussian(m, d), v = rng.gaussian(m, d);
        worst = std::max(worst, max_abs_diff(oblique_attention(q, k, v, cfg),
                                             diffcheck::naive_attention_reference(
                                                 q, k, v, diffcheck::Space::oblique, cfg)));
        worst = std::max(worst, max_abs_diff(lorentz_cross_attention(q, k, v, cfg),
                                             diffcheck::naive_attention_reference(
                                                 q, k, v, diffcheck::Space::lorentz, cfg)));
    }
    return upper(worst, 1e-12, "max |kernel - scalar reference|, 100 cases each, heads in {1, 4}");
}

inline Result weight_monotonicity(const Options& o) {
    Rng rng(o.seed);
    int violations = 0;
    for (int t = 0; t < 500; ++t) {
        Matrix d(1, 2 + rng.index(8));
        for (double& x : d.data()) x = rng.uniform(0.0, 3.0);
        const std::size_t j = rng.index(d.cols());
        Matrix bigger = d;
        bigger(0, j) += rng.uniform(1e-3, 1.0);
        if (!(oblique_weights_from_distances(bigger, o.attention)(0, j) <
              oblique_weights_from_distances(d, o.attention)(0, j)))
            ++violations;
        if (!(lorentz_weights_from_distances(bigger, o.attention)(0, j) <
              lorentz_weights_from_distances(d, o.attention)(0, j)))
            ++violations;
    }
    return Result{{}, {}, violations == 0, static_cast<double>(violations), 0.0,
                  "A_ij strictly decreases when d_ij grows, 500 rows"};
}

// --- diffcheck -------------------------------------------------------------

inline Result oblique_gradient_check(const Options& o) {
    Rng rng(o.seed);
    const double eps = o.attention.eps_oblique;
    double worst = 0.0;
    int done = 0;
    while (done < 500) {
        const std::size_t n = 2 + rng.index(6);
        const Vector q = rng.unit(n), k = rng.unit(n);
        if (std::abs(dot(q, k)) > 0.99) continue;
        const auto f = [&](const Vector& x) {
            return std::acos(oblique::clip_cosine(dot(x, k), eps));
        };
        worst = std::max(worst, diffcheck::relative_error(oblique::distance_gradient(q, k, eps),
                                                          diffcheck::finite_diff_gradient(f, q)));
        ++done;
    }
    return upper(worst, 1e-5, "analytic vs central differences, 500 pairs");
}

inline Result lorentz_gradient_check(const Options& o) {
    Rng rng(o.seed);
    const lorentz::Curvature c(o.attention.curvature);
    double worst = 0.0;
    int done = 0;
    while (done < 500) {
        const std::size_t n = 2 + rng.index(6);
        const lorentz::TangentAtOrigin u(rng.in_ball(n, 3.0)), w(rng.in_ball(n, 3.0));
        const auto x = lorentz::exp_origin(u, c), y = lorentz::exp_origin(w, c);
        if (lorentz::geodesic_distance(x, y, c) < 0.05) continue;
        const auto f = [&](const Vector& e) {
            return lorentz::geodesic_distance(lorentz::exp_origin(lorentz::TangentAtOrigin(e), c),
                                              y, c);
        };
        worst = std::max(worst, diffcheck::relative_error(lorentz::distance_gradient(u, w, c),
                                                          diffcheck::finite_diff_gradient(f, u.enc)));
        ++done;
    }
    return upper(worst, 1e-5, "analytic vs central differences, 500 pairs");
}

// --- experiments -----------------------------------------------------------

inline Result embedding_determinism(const Options& o) {
    experiments::TreeSpec spec{2, 3, 1.0};
    double worst = 0.0;
    for (auto space : {experiments::EmbeddingSpace::euclidean, experiments::EmbeddingSpace::lorentz}) {
        experiments::EmbeddingParams p;
        p.space = space;
        p.steps = 200;
        p.seed = o.seed;
        const auto a = experiments::embed_tree(spec, p), b = experiments::embed_tree(spec, p);
        if (a.final_distortion != b.final_distortion) worst = 1.0;
    }
    return upper(worst, 0.0, "two runs with one seed give bit-identical distortion");
}

inline Result stress_monotone(const Options& o) {
    experiments::TreeSpec spec{2, 3, 1.0};
    int increases = 0;
    for (auto space : {experiments::EmbeddingSpace::euclidean, experiments::EmbeddingSpace::lorentz}) {
        experiments::EmbeddingParams p;
        p.space = space;
        p.steps = 300;
        p.seed = o.seed;
        const auto run = experiments::embed_tree(spec, p);
        std::vector<std::size_t> starts = run.stage_starts;
        starts.push_back(run.stress_trace.size());
        for (std::size_t s = 0; s + 1 < starts.size(); ++s)
            for (std::size_t i = starts[s] + 1; i < starts[s + 1]; ++i)
                if (run.stress_trace[i] > run.stress_trace[i - 1]) ++increases;
    }
    return Result{{}, {}, increases == 0, static_cast<double>(increases), 0.0,
                  "stress increases between accepted steps within a curvature stage"};
}

inline Result descent_decreasing(const Options& o) {
    int violations = 0;
    for (double kappa : {1.0, 10.0, 100.0}) {
        experiments::DescentParams p;
        p.condition_number = kappa;
        p.seed = o.seed;
        p.step_scale = 0.9;
        const auto run = experiments::descent_demo(p);
        const auto& tr = run.unconstrained.trajectory;
        for (std::size_t i = 1; i < tr.size(); ++i)
            if (!(tr[i].f < tr[i - 1].f)) ++violations;
    }
    return Result{{}, {}, violations == 0, static_cast<double>(violations), 0.0,
                  "unconstrained objective strictly decreases at step 0.9/L"};
}

}  // namespace detail

inline const std::vector<Property>& registry() {
    static const std::vector<Property> props = {
        {"core-linalg", "matmul associativity", detail::matmul_associativity},
        {"core-linalg", "softmax rows sum to 1", detail::softmax_sums},
        {"core-linalg", "softmax shift invariance", detail::softmax_shift},
        {"oblique", "project gives unit columns", detail::project_unit_columns},
        {"oblique", "project idempotent", detail::project_idempotent},
        {"oblique", "geodesic distance symmetry", detail::oblique_symmetry},
        {"oblique", "pairwise triangle inequality", detail::oblique_triangle},
        {"oblique", "tangent projection norm bound", detail::tangent_bound},
        {"oblique", "project scale invariance", detail::project_scale_invariance},
        {"oblique", "clip floor", detail::oblique_clip_floor},
        {"lorentz", "hyperboloid membership", detail::hyperboloid_membership},
        {"lorentz", "exp/log roundtrip", detail::exp_log_roundtrip},
        {"lorentz", "radial isometry", detail::radial_isometry},
        {"lorentz", "symmetry and triangle inequality", detail::lorentz_metric_axioms},
        {"lorentz", "curvature scaling", detail::curvature_scaling},
        {"lorentz", "clip floor", detail::lorentz_clip_floor},
        {"geodesic-attention", "weight rows sum to 1", detail::weight_rows_sum},
        {"geodesic-attention", "permutation equivariance", detail::permutation_equivariance},
        {"geodesic-attention", "clip-floor safety", detail::clip_safety},
        {"geodesic-attention", "kernel/oracle equivalence", detail::oracle_equivalence},
        {"geodesic-attention", "weight monotonicity", detail::weight_monotonicity},
        {"diffcheck", "oblique gradient vs finite differences", detail::oblique_gradient_check},
        {"diffcheck", "lorentz gradient vs finite differences", detail::lorentz_gradient_check},
        {"experiments", "embed_tree determinism", detail::embedding_determinism},
        {"experiments", "stress non-increasing", detail::stress_monotone},
        {"experiments", "descent objective decreasing", detail::descent_decreasing},
    };
    return props;
}

/// Runs every property whose module or name contains `filter` (all if empty).
inline std::vector<Result> run(const Options& opts, const std::string& filter = {}) {
    std::vector<Result> out;
    for (const Property& p : registry()) {
        if (!filter.empty() && p.module.find(filter) == std::string::npos &&
            p.name.find(filter) == std::string::npos)
            continue;
        Result r;
        try {
            r = p.run(opts);
        } catch (const std::exception& e) {
            r = Result{{}, {}, false, std::numeric_limits<double>::quiet_NaN(), 0.0,
                       std::string("threw: ") + e.what()};
        }
        r.module = p.module;
        r.name = p.name;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace geoattn::verify
