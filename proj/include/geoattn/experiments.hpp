#pragma once

// Desk-scale experiments:
//  * embed_tree: fit a complete b-ary tree into Euclidean or Lorentz space by
//    gradient descent on stress and measure distortion.
//  * descent_demo: gradient descent on an ill-conditioned quadratic, raw
//    versus after oblique column normalization of its data matrix.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoattn/linalg.hpp"
#include "geoattn/lorentz.hpp"
#include "geoattn/oblique.hpp"

namespace geoattn::experiments {

inline constexpr std::uint64_t kSeeds[] = {0, 333, 777};

// ---------------------------------------------------------------------------
// Tree embedding

struct TreeSpec {
    std::size_t branching = 2;
    std::size_t depth = 5;
    double edge_length = 1.0;

    void validate() const {
        if (branching < 2) throw std::invalid_argument("tree branching must be >= 2");
        if (depth < 1) throw std::invalid_argument("tree depth must be >= 1");
        if (!(edge_length > 0.0)) throw std::invalid_argument("edge length must be > 0");
    }
};

/// Complete tree in breadth-first order; node 0 is the root.
struct Tree {
    std::vector<std::size_t> parent;
    std::vector<std::size_t> level;

    std::size_t size() const { return parent.size(); }
};

inline Tree build_tree(const TreeSpec& spec) {
    spec.validate();
    Tree t;
    t.parent.push_back(0);
    t.level.push_back(0);
    std::size_t first = 0, count = 1;
    for (std::size_t lvl = 1; lvl <= spec.depth; ++lvl) {
        for (std::size_t p = first; p < first + count; ++p) {
            for (std::size_t b = 0; b < spec.branching; ++b) {
                t.parent.push_back(p);
                t.level.push_back(lvl);
            }
        }
        first += count;
        count *= spec.branching;
    }
    return t;
}

inline std::size_t hop_distance(const Tree& t, std::size_t a, std::size_t b) {
    std::size_t hops = 0;
    while (a != b) {
        if (t.level[a] >= t.level[b]) {
            a = t.parent[a];
        } else {
            b = t.parent[b];
        }
        ++hops;
    }
    return hops;
}

/// edge_length * hop count for every pair.
inline Matrix tree_distances(const TreeSpec& spec) {
    const Tree t = build_tree(spec);
    Matrix d(t.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
            d(i, j) = d(j, i) = spec.edge_length * static_cast<double>(hop_distance(t, i, j));
    return d;
}

enum class EmbeddingSpace { euclidean, lorentz };

inline std::string to_string(EmbeddingSpace s) {
    return s == EmbeddingSpace::euclidean ? "euclidean" : "lorentz";
}

struct EmbeddingParams {
    EmbeddingSpace space = EmbeddingSpace::euclidean;
    double curvature = 1.0;
    std::size_t dim = 2;
    std::size_t steps = 5000;
    double step_size = 1e-3;
    std::uint64_t seed = 0;
    double init_scale = 0.1;
    bool line_search = true;
    /// Lorentz arm only: precondition with the inverse metric of the tangent chart.
    bool riemannian = true;
    /// Lorentz arm only: number of stages in a geometric curvature schedule from
    /// the minimum curvature up to `curvature`, each warm-starting the next.
    /// 1 disables the schedule.
    std::size_t continuation_stages = 10;
};

struct EmbeddingRun {
    EmbeddingParams params;
    /// Mean of |d_space - d_tree| / d_tree over all node pairs.
    double final_distortion = 0.0;
    /// max(d_space / d_tree) * max(d_tree / d_space).
    double worst_distortion = 0.0;
    double final_stress = 0.0;
    std::size_t accepted_steps = 0;
    /// Stress after every accepted step; a new curvature stage starts at each
    /// index in `stage_starts` (stress is only comparable within a stage).
    std::vector<double> stress_trace;
    std::vector<std::size_t> stage_starts{0};
    Matrix coordinates;
};

class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

class Embedder {
public:
    Embedder(const Matrix& target, const EmbeddingParams& p)
        : target_(target), p_(p), curvature_(p.curvature) {}

    void set_curvature(double c) { curvature_ = c; }

    Matrix distances(const Matrix& x) const {
        const std::size_t n = x.rows();
        Matrix d(n, n);
        if (p_.space == EmbeddingSpace::euclidean) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < x.cols(); ++k) {
                        const double t = x(i, k) - x(j, k);
                        s += t * t;
                    }
                    d(i, j) = d(j, i) = std::sqrt(s);
                }
            return d;
        }
        const lorentz::Curvature c(curvature_);
        std::vector<lorentz::LorentzPoint> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            pts.push_back(lorentz::exp_origin(lorentz::TangentAtOrigin(x.row(i)), c));
        return lorentz::pairwise_distances(pts, pts, c);
    }

    double stress(const Matrix& d) const {
        double s = 0.0;
        for (std::size_t i = 0; i < d.rows(); ++i)
            for (std::size_t j = i + 1; j < d.cols(); ++j) {
                const double r = d(i, j) - target_(i, j);
                s += r * r;
            }
        return s;
    }

    Matrix gradient(const Matrix& x, const Matrix& d) const {
        const std::size_t n = x.rows(), dim = x.cols();
        Matrix g(n, dim);
        const lorentz::Curvature c(curvature_);
        std::vector<lorentz::TangentAtOrigin> u;
        std::vector<lorentz::LorentzPoint> pts;
        if (p_.space == EmbeddingSpace::lorentz) {
            u.reserve(n);
            pts.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                u.emplace_back(x.row(i));
                pts.push_back(lorentz::exp_origin(u.back(), c));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double w = 2.0 * (d(i, j) - target_(i, j));
                if (p_.space == EmbeddingSpace::euclidean) {
                    if (d(i, j) <= 0.0) continue;
                    for (std::size_t k = 0; k < dim; ++k) {
                        const double t = w * (x(i, k) - x(j, k)) / d(i, j);
                        g(i, k) += t;
                        g(j, k) -= t;
                    }
                    continue;
                }
                try {
                    const Vector gi = lorentz::distance_gradient(u[i], pts[i], pts[j], c);
                    const Vector gj = lorentz::distance_gradient(u[j], pts[j], pts[i], c);
                    for (std::size_t k = 0; k < dim; ++k) {
                        g(i, k) += w * gi[k];
                        g(j, k) += w * gj[k];
                    }
                } catch (const std::domain_error&) {
                    // coincident pair: no defined gradient, contributes nothing
                }
            }
        }
        if (p_.space == EmbeddingSpace::lorentz && p_.riemannian) {
            for (std::size_t i = 0; i < n; ++i) precondition(g, x, i, c);
        }
        return g;
    }

    // Normal coordinates at the origin carry the metric dr^2 + sinhc(sqrt(c) r)^2 r^2 dphi^2,
    // so the Riemannian gradient divides the angular part by sinhc^2.
    static void precondition(Matrix& g, const Matrix& x, std::size_t i, lorentz::Curvature c) {
        const std::size_t dim = x.cols();
        double r2 = 0.0, proj = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            r2 += x(i, k) * x(i, k);
            proj += x(i, k) * g(i, k);
        }
        if (r2 <= 0.0) return;
        const double s = lorentz::detail::sinhc(c.sqrt() * std::sqrt(r2));
        const double inv = 1.0 / (s * s);
        for (std::size_t k = 0; k < dim; ++k) {
            const double radial = proj / r2 * x(i, k);
            g(i, k) = radial + inv * (g(i, k) - radial);
        }
    }

private:
    const Matrix& target_;
    const EmbeddingParams& p_;
    double curvature_;
};

inline void summarize(EmbeddingRun& run, const Matrix& d, const Matrix& target) {
    double sum = 0.0, expand = 0.0, contract = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = i + 1; j < d.cols(); ++j) {
            sum += std::abs(d(i, j) - target(i, j)) / target(i, j);
            expand = std::max(expand, d(i, j) / target(i, j));
            contract = std::max(contract, target(i, j) / std::max(d(i, j), 1e-300));
            ++pairs;
        }
    run.final_distortion = pairs ? sum / static_cast<double>(pairs) : 0.0;
    run.worst_distortion = expand * contract;
}

}  // namespace detail

/// Minimizes stress sum_{i<j} (d_space(x_i, x_j) - d_tree(i, j))^2 by gradient
/// descent from a seeded Gaussian start (ambient coordinates for Euclidean,
/// tangent vectors at the origin for Lorentz). With line search, a step is
/// accepted only if stress does not increase; the step grows by 1.2 after an
/// acceptance and halves after a rejection.
///
/// From a random start the Lorentz arm tends to settle in a folded
/// configuration. The continuation schedule starts it at the minimum
/// curvature, where the model is nearly flat, and raises c geometrically to
/// the target, splitting the step budget evenly across stages.
inline EmbeddingRun embed_tree(const TreeSpec& spec, const EmbeddingParams& params) {
    if (params.dim < 2) throw std::invalid_argument("embedding dim must be >= 2");
    if (!(params.step_size > 0.0)) throw std::invalid_argument("step size must be > 0");
    if (params.space == EmbeddingSpace::lorentz) (void)lorentz::Curvature(params.curvature);

    const Matrix target = tree_distances(spec);
    const std::size_t n = target.rows();

    std::mt19937_64 rng(params.seed);
    std::normal_distribution<double> gauss(0.0, params.init_scale);
    Matrix x(n, params.dim);
    for (double& v : x.data()) v = gauss(rng);

    detail::Embedder em(target, params);
    Matrix d = em.distances(x);
    double stress = em.stress(d);

    EmbeddingRun run;
    run.params = params;
    run.stress_trace.push_back(stress);

    const auto diverged = [&](double s) {
        if (!std::isfinite(s)) {
            throw DivergenceError("stress became non-finite at step size " +
                                  format_double(params.step_size) +
                                  "; retry with a smaller --step-size");
        }
    };

    // Curvature schedule: a single stage at the target unless continuation is on.
    std::vector<double> schedule{params.curvature};
    if (params.space == EmbeddingSpace::lorentz && params.continuation_stages > 1 &&
        params.curvature > lorentz::kMinCurvature) {
        schedule.clear();
        const double ratio = params.curvature / lorentz::kMinCurvature;
        const std::size_t stages = params.continuation_stages;
        for (std::size_t k = 0; k < stages; ++k) {
            const double f = static_cast<double>(k) / static_cast<double>(stages - 1);
            schedule.push_back(k + 1 == stages ? params.curvature
                                               : lorentz::kMinCurvature * std::pow(ratio, f));
        }
    }

    double eta = params.step_size;
    std::size_t budget_used = 0;
    for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
        const std::size_t budget = stage + 1 == schedule.size()
                                       ? params.steps - budget_used
                                       : params.steps / schedule.size();
        budget_used += budget;
        if (stage > 0) {
            em.set_curvature(schedule[stage]);
            d = em.distances(x);
            stress = em.stress(d);
            run.stage_starts.push_back(run.stress_trace.size());
            run.stress_trace.push_back(stress);
        }
        for (std::size_t step = 0; step < budget; ++step) {
            const Matrix g = em.gradient(x, d);
            bool accepted = false;
            for (int attempt = 0; attempt < 60; ++attempt) {
                Matrix trial = x - eta * g;
                Matrix td = em.distances(trial);
                const double ts = em.stress(td);
                if (!params.line_search) {
                    diverged(ts);
                    x = std::move(trial);
                    d = std::move(td);
                    stress = ts;
                    accepted = true;
                    break;
                }
                if (std::isfinite(ts) && ts <= stress) {
                    x = std::move(trial);
                    d = std::move(td);
                    stress = ts;
                    accepted = true;
                    eta *= 1.2;
                    break;
                }
                eta *= 0.5;
            }
            if (!accepted) break;  // no descent step left at any tried size
            ++run.accepted_steps;
            run.stress_trace.push_back(stress);
        }
    }
    diverged(stress);

    run.final_stress = stress;
    detail::summarize(run, d, target);
    run.coordinates = std::move(x);
    return run;
}

// ---------------------------------------------------------------------------
// Descent demo

struct DescentParams {
    double condition_number = 100.0;
    double tol = 1e-6;
    std::size_t max_iters = 100000;
    std::uint64_t seed = 0;
    /// Each arm steps with step_scale / L, L the Lipschitz constant of its gradient.
    double step_scale = 1.0;
};

struct TrajectoryPoint {
    std::size_t iter;
    double x;
    double y;
    double f;
};

struct DescentArm {
    std::size_t iterations = 0;
    bool converged = false;
    double step = 0.0;
    std::vector<TrajectoryPoint> trajectory;
};

struct DescentRun {
    DescentParams params;
    double start_x = 0.0;
    double start_y = 0.0;
    DescentArm unconstrained;
    DescentArm oblique;
};

/// Seeded start inside the box [-4, 4] x [-3, 3], at least 0.5 from either axis.
inline std::pair<double, double> descent_start(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.5, 4.0), uy(0.5, 3.0), sign(0.0, 1.0);
    const double x = ux(rng) * (sign(rng) < 0.5 ? -1.0 : 1.0);
    const double y = uy(rng) * (sign(rng) < 0.5 ? -1.0 : 1.0);
    return {x, y};
}

namespace detail {

// Largest eigenvalue of a symmetric 2x2 matrix.
inline double lambda_max_2x2(const Matrix& g) {
    const double tr = g(0, 0) + g(1, 1);
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    return 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
}

inline double quad(const Matrix& g, double x, double y) {
    return g(0, 0) * x * x + (g(0, 1) + g(1, 0)) * x * y + g(1, 1) * y * y;
}

}  // namespace detail

/// Minimizes f(x) = |B x|^2 with B = diag(1, sqrt(kappa)), i.e. x^T diag(1, kappa) x.
///
/// Unconstrained arm: plain gradient descent in R^2, step step_scale / (2 kappa).
///
/// Oblique arm: the columns of B are normalized with oblique::project, giving
/// the equivalent problem in z = diag(|b_j|) x with Gram matrix G = B~^T B~
/// (circular contours when B's columns are orthogonal). The iterate is kept as
/// z = r * theta with theta a unit 2x1 oblique point: theta steps along
/// tangent_project of its gradient followed by retract, r along its scalar
/// gradient, both with step_scale / L, L = 2 lambda_max(G).
inline DescentRun descent_demo(const DescentParams& params) {
    if (!(params.condition_number >= 1.0))
        throw std::invalid_argument("condition number must be >= 1");
    if (!(params.tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (!(params.step_scale > 0.0 && params.step_scale <= 1.0))
        throw std::invalid_argument("step scale must lie in (0, 1]");

    DescentRun run;
    run.params = params;
    std::tie(run.start_x, run.start_y) = descent_start(params.seed);

    const double kappa = params.condition_number;
    Matrix b(2, 2);
    b(0, 0) = 1.0;
    b(1, 1) = std::sqrt(kappa);
    const Matrix a = matmul(transpose(b), b);

    {
        DescentArm& arm = run.unconstrained;
        arm.step = params.step_scale / (2.0 * detail::lambda_max_2x2(a));
        double x = run.start_x, y = run.start_y;
        double f = detail::quad(a, x, y);
        arm.trajectory.push_back({0, x, y, f});
        while (f > params.tol && arm.iterations < params.max_iters) {
            const double gx = 2.0 * (a(0, 0) * x + a(0, 1) * y);
            const double gy = 2.0 * (a(1, 0) * x + a(1, 1) * y);
            x -= arm.step * gx;
            y -= arm.step * gy;
            f = detail::quad(a, x, y);
            ++arm.iterations;
            arm.trajectory.push_back({arm.iterations, x, y, f});
        }
        arm.converged = f <= params.tol;
    }

    {
        DescentArm& arm = run.oblique;
        const Vector norms = col_norms(b);
        const Matrix bn = oblique::project(b).point.matrix();
        const Matrix g = matmul(transpose(bn), bn);
        const double lip = 2.0 * detail::lambda_max_2x2(g);
        arm.step = params.step_scale / lip;

        const double zx = norms[0] * run.start_x, zy = norms[1] * run.start_y;
        double r = std::hypot(zx, zy);
        Matrix dir(2, 1);
        dir(0, 0) = zx;
        dir(1, 0) = zy;
        oblique::ObliqueMatrix theta = oblique::project(dir).point;

        const auto record = [&] {
            const double x = r * theta(0, 0), y = r * theta(1, 0);
            const double f = detail::quad(g, x, y);
            arm.trajectory.push_back({arm.iterations, x, y, f});
            return f;
        };
        double f = record();
        while (f > params.tol && arm.iterations < params.max_iters) {
            // Direction: restricted objective r^2 theta^T G theta on the circle.
            Matrix grad_theta(2, 1);
            grad_theta(0, 0) = 2.0 * r * r * (g(0, 0) * theta(0, 0) + g(0, 1) * theta(1, 0));
            grad_theta(1, 0) = 2.0 * r * r * (g(1, 0) * theta(0, 0) + g(1, 1) * theta(1, 0));
            const double curvature = std::max(r * r * lip, 1e-300);
            const oblique::ObliqueTangent xi = oblique::tangent_project(theta, grad_theta);
            // Radial: d/dr of r^2 theta^T G theta, evaluated before theta moves.
            const double rq = detail::quad(g, theta(0, 0), theta(1, 0));
            theta = oblique::retract(xi, -params.step_scale / curvature);
            r -= arm.step * 2.0 * r * rq;
            ++arm.iterations;
            f = record();
        }
        arm.converged = f <= params.tol;
    }
    return run;
}

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes `iter,x,y,f`, one row per trajectory point.
inline void export_trajectory(const std::vector<TrajectoryPoint>& traj,
                              const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw OutputError("cannot write trajectory file '" + path.string() + "'");
    os << "iter,x,y,f\n";
    for (const auto& p : traj) {
        os << p.iter << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
           << format_double(p.f) << '\n';
    }
    if (!os) throw OutputError("failed while writing '" + path.string() + "'");
}

struct TrajectoryFiles {
    std::filesystem::path unconstrained;
    std::filesystem::path oblique;
};

/// Writes `<prefix>unconstrained.csv` and `<prefix>oblique.csv` into `dir`,
/// which must already exist.
inline TrajectoryFiles export_trajectories(const DescentRun& run, const std::filesystem::path& dir,
                                           const std::string& prefix = "") {
    if (!std::filesystem::is_directory(dir)) {
        throw OutputError("output directory '" + dir.string() + "' does not exist");
    }
    TrajectoryFiles files{dir / (prefix + "unconstrained.csv"), dir / (prefix + "oblique.csv")};
    export_trajectory(run.unconstrained.trajectory, files.unconstrained);
    export_trajectory(run.oblique.trajectory, files.oblique);
    return files;
}

inline std::vector<TrajectoryPoint> read_trajectory(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw OutputError("cannot read trajectory file '" + path.string() + "'");
    std::string line;
    if (!std::getline(is, line) || line != "iter,x,y,f")
        throw FormatError("'" + path.string() + "' lacks the iter,x,y,f header");
    std::vector<TrajectoryPoint> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 4) throw FormatError("malformed trajectory row '" + line + "'");
        out.push_back({static_cast<std::size_t>(std::stoull(cells[0])), parse_double(cells[1]),
                       parse_double(cells[2]), parse_double(cells[3])});
    }
    return out;
}

}  // namespace geoattn::experiments
