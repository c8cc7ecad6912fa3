#pragma once

// Lorentz hyperboloid model of hyperbolic space with curvature -c:
//   L^n = { x in R^(n+1) : <x, x>_L = -1/c, x_time > 0 },
//   <x, y>_L = x_space . y_space - x_time * y_time.
// All maps go through the origin O = [0, 1/sqrt(c)].

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geoattn/linalg.hpp"

namespace geoattn::lorentz {

inline constexpr double kMinCurvature = 1e-3;
inline constexpr double kDefaultClip = 1e-15;
inline constexpr double kMembershipTolerance = 1e-6;

class ManifoldError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Positive curvature magnitude c; the manifold has sectional curvature -c.
class Curvature {
public:
    explicit Curvature(double c) : c_(c) {
        if (!std::isfinite(c) || c < kMinCurvature) {
            throw std::invalid_argument("curvature must be finite and >= " +
                                        format_double(kMinCurvature) + ", got " +
                                        format_double(c));
        }
    }
    double value() const noexcept { return c_; }
    double sqrt() const noexcept { return std::sqrt(c_); }

    friend bool operator==(Curvature, Curvature) = default;

private:
    double c_;
};

/// A point on the upper sheet. `time` is always derived from `space`
/// unless the point comes from validated external data.
class LorentzPoint {
public:
    /// Places `space` on the sheet: time = sqrt(1/c + |space|^2).
    static LorentzPoint on_sheet(Vector space, Curvature c) {
        const double t = std::sqrt(1.0 / c.value() + dot(space, space));
        return LorentzPoint(std::move(space), t);
    }

    static LorentzPoint origin(std::size_t n, Curvature c) {
        return LorentzPoint(Vector(n, 0.0), 1.0 / c.sqrt());
    }

    /// Accepts explicit coordinates after checking hyperboloid membership.
    static LorentzPoint validated(Vector space, double time, Curvature c,
                                  double tol = kMembershipTolerance);

    const Vector& space() const noexcept { return space_; }
    double time() const noexcept { return time_; }
    std::size_t dim() const noexcept { return space_.size(); }

private:
    LorentzPoint(Vector space, double time) : space_(std::move(space)), time_(time) {}

    Vector space_;
    double time_;
};

/// Tangent vector [enc, 0] at the origin, applied with a positive scale alpha
/// (the effective tangent is scale * enc).
struct TangentAtOrigin {
    Vector enc;
    double scale = 1.0;

    TangentAtOrigin() = default;
    explicit TangentAtOrigin(Vector e, double s = 1.0) : enc(std::move(e)), scale(s) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("tangent scale must be positive, got " +
                                        format_double(s));
        }
    }

    /// The conventional initial scale 1/sqrt(n) for an n-dimensional embedding.
    static double default_scale(std::size_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); }

    /// Scale stored as log(alpha), exponentiated once here.
    static TangentAtOrigin from_log_scale(Vector e, double log_scale) {
        return TangentAtOrigin(std::move(e), std::exp(log_scale));
    }

    Vector effective() const {
        Vector v = enc;
        for (double& x : v) x *= scale;
        return v;
    }
};

inline double lorentz_inner(const LorentzPoint& x, const LorentzPoint& y) {
    if (x.dim() != y.dim()) {
        throw DimensionError("lorentz_inner: spatial dims " + std::to_string(x.dim()) + " and " +
                             std::to_string(y.dim()) + " differ");
    }
    return dot(x.space(), y.space()) - x.time() * y.time();
}

/// |<x, x>_L + 1/c| evaluated with the time square split exactly via fma, so
/// the residual reflects the stored coordinates rather than evaluation error.
inline double hyperboloid_residual(const LorentzPoint& x, Curvature c) {
    const double s = dot(x.space(), x.space());
    const double hi = x.time() * x.time();
    const double lo = std::fma(x.time(), x.time(), -hi);
    return std::abs(((s - hi) - lo) + 1.0 / c.value());
}

/// Accepts a residual of `tol`, widened in proportion to c * time^2 for points
/// far from the origin, where double coordinates cannot do better than a
/// relative error of a few ulps.
inline bool on_manifold(const LorentzPoint& x, Curvature c, double tol = kMembershipTolerance) {
    if (!(x.time() > 0.0)) return false;
    const double scale = std::max(1.0, c.value() * x.time() * x.time());
    return hyperboloid_residual(x, c) <= tol * scale;
}

inline void require_on_manifold(const LorentzPoint& x, Curvature c, const char* what,
                                double tol = kMembershipTolerance) {
    if (!on_manifold(x, c, tol)) {
        throw ManifoldError(std::string(what) + " is off the hyperboloid: residual " +
                            format_double(hyperboloid_residual(x, c)) + " at c=" +
                            format_double(c.value()) + ", time " + format_double(x.time()));
    }
}

inline LorentzPoint LorentzPoint::validated(Vector space, double time, Curvature c, double tol) {
    LorentzPoint p(std::move(space), time);
    require_on_manifold(p, c, "point", tol);
    return p;
}

namespace detail {

// sinh(a) / a, with the Taylor series below 1e-4 to avoid 0/0.
inline double sinhc(double a) {
    if (a < 1e-4) {
        const double a2 = a * a;
        return 1.0 + a2 / 6.0 + a2 * a2 / 120.0;
    }
    return std::sinh(a) / a;
}

// (a cosh a - sinh a) / a^3, the radial derivative term of sinhc.
inline double sinhc_slope(double a) {
    if (a < 1e-2) {
        const double a2 = a * a;
        return 1.0 / 3.0 + a2 / 30.0 + a2 * a2 / 840.0;
    }
    return (a * std::cosh(a) - std::sinh(a)) / (a * a * a);
}

inline double arcosh_clipped(double z, double eps_clip) { return std::acosh(std::max(z, 1.0 + eps_clip)); }

}  // namespace detail

/// exp_O(u): space = sinh(sqrt(c) r) / (sqrt(c) r) * v with v = scale * enc,
/// r = |v|; time is recomputed from space.
inline LorentzPoint exp_origin(const TangentAtOrigin& u, Curvature c) {
    Vector v = u.effective();
    const double factor = detail::sinhc(c.sqrt() * norm(v));
    for (double& x : v) x *= factor;
    return LorentzPoint::on_sheet(std::move(v), c);
}

/// log_O(x), inverse of exp_origin for a tangent with the given scale.
///
/// Uses z = -c <x, O>_L inside both arcosh and the root, so log(exp(u)) = u
/// for every curvature (the argument carries the same c as the distance).
inline TangentAtOrigin log_origin(const LorentzPoint& x, Curvature c, double scale = 1.0,
                                  double eps_clip = kDefaultClip) {
    require_on_manifold(x, c, "log_origin input");
    const LorentzPoint o = LorentzPoint::origin(x.dim(), c);
    const double z = std::max(-c.value() * lorentz_inner(x, o), 1.0 + eps_clip);
    const double ratio = std::acosh(z) / std::sqrt((z - 1.0) * (z + 1.0));
    Vector enc = x.space();
    for (double& e : enc) e *= ratio / scale;
    return TangentAtOrigin(std::move(enc), scale);
}

namespace detail {
inline double distance_unchecked(const LorentzPoint& x, const LorentzPoint& y, Curvature c,
                                 double eps_clip) {
    return arcosh_clipped(-c.value() * lorentz_inner(x, y), eps_clip) / c.sqrt();
}
}  // namespace detail

/// (1/sqrt(c)) arcosh(max(-c <x, y>_L, 1 + eps_clip)).
/// The floor makes the self-distance arcosh(1 + eps)/sqrt(c) instead of 0.
inline double geodesic_distance(const LorentzPoint& x, const LorentzPoint& y, Curvature c,
                                double eps_clip = kDefaultClip) {
    require_on_manifold(x, c, "first point");
    require_on_manifold(y, c, "second point");
    return detail::distance_unchecked(x, y, c, eps_clip);
}

inline Matrix pairwise_distances(const std::vector<LorentzPoint>& xs,
                                 const std::vector<LorentzPoint>& ys, Curvature c,
                                 double eps_clip = kDefaultClip) {
    const std::size_t n = xs.empty() ? 0 : xs.front().dim();
    for (const auto* set : {&xs, &ys}) {
        for (const auto& p : *set) {
            if (p.dim() != n) {
                throw DimensionError("lorentz pairwise_distances: spatial dims " +
                                     std::to_string(n) + " and " + std::to_string(p.dim()) +
                                     " differ");
            }
            require_on_manifold(p, c, "pairwise input");
        }
    }
    Matrix d(xs.size(), ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ys.size(); ++j)
            d(i, j) = detail::distance_unchecked(xs[i], ys[j], c, eps_clip);
    return d;
}

/// sinh^(n-1)(sqrt(c) r): the radial volume-growth kernel of n-dimensional
/// hyperbolic space, up to a constant.
inline double volume_growth(double r, std::size_t n, Curvature c) {
    if (!(r >= 0.0)) throw std::invalid_argument("volume_growth: radius must be >= 0");
    if (n < 1) throw std::invalid_argument("volume_growth: dimension must be >= 1");
    return std::pow(std::sinh(c.sqrt() * r), static_cast<double>(n - 1));
}

/// Gradient of d(x, y) with respect to u.enc, where x = exp_O(u) and y is any
/// point; callers that already hold the lifted points pass them in.
///
/// Chain rule through z = -c <x, y>_L with time a function of space:
///   dz/dx_space = c (y_time / x_time * x_space - y_space),
///   dx_space/dv = g I + c h v v^T, with g = sinhc(a), h = sinhc_slope(a), a = sqrt(c)|v|,
///   dv/d enc = scale.
/// Coincident points (z at the clip floor) have no gradient and raise.
inline Vector distance_gradient(const TangentAtOrigin& u, const LorentzPoint& x,
                                const LorentzPoint& y, Curvature c,
                                double eps_clip = kDefaultClip) {
    if (u.enc.size() != x.dim() || x.dim() != y.dim()) {
        throw DimensionError("lorentz distance_gradient: dims " + std::to_string(u.enc.size()) +
                             ", " + std::to_string(x.dim()) + " and " + std::to_string(y.dim()) +
                             " differ");
    }
    const double z = -c.value() * lorentz_inner(x, y);
    if (!(z > 1.0 + eps_clip)) {
        throw std::domain_error("lorentz distance_gradient: points coincide at the clip floor");
    }
    const double dd_dz = 1.0 / (c.sqrt() * std::sqrt((z - 1.0) * (z + 1.0)));

    const std::size_t n = x.dim();
    const double ratio = y.time() / x.time();
    double v2 = 0.0, vdot = 0.0;
    Vector dz_ds(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = u.scale * u.enc[i];
        dz_ds[i] = c.value() * (ratio * x.space()[i] - y.space()[i]);
        v2 += vi * vi;
        vdot += vi * dz_ds[i];
    }
    const double a = c.sqrt() * std::sqrt(v2);
    const double g = detail::sinhc(a);
    const double h = c.value() * detail::sinhc_slope(a);

    Vector grad(n);
    for (std::size_t i = 0; i < n; ++i)
        grad[i] = u.scale * dd_dz * (g * dz_ds[i] + h * vdot * u.scale * u.enc[i]);
    return grad;
}

/// Gradient of d(exp_O(u), exp_O(w)) with respect to u.enc.
inline Vector distance_gradient(const TangentAtOrigin& u, const TangentAtOrigin& w, Curvature c,
                                double eps_clip = kDefaultClip) {
    if (u.enc.size() != w.enc.size()) {
        throw DimensionError("lorentz distance_gradient: dims " + std::to_string(u.enc.size()) +
                             " and " + std::to_string(w.enc.size()) + " differ");
    }
    return distance_gradient(u, exp_origin(u, c), exp_origin(w, c), c, eps_clip);
}

// CSV row `c,time,space_1,...,space_n`.

inline void write_point_csv(std::ostream& os, const LorentzPoint& x, Curvature c) {
    os << format_double(c.value()) << ',' << format_double(x.time());
    for (double s : x.space()) os << ',' << format_double(s);
    os << '\n';
}

/// Parses one row and re-checks hyperboloid membership.
inline std::pair<Curvature, LorentzPoint> parse_point_csv(const std::string& line) {
    const auto cells = split_csv_line(line);
    if (cells.size() < 2) throw FormatError("lorentz point row needs at least c and time");
    const Curvature c(parse_double(cells[0]));
    const double time = parse_double(cells[1]);
    Vector space;
    for (std::size_t i = 2; i < cells.size(); ++i) space.push_back(parse_double(cells[i]));
    return {c, LorentzPoint::validated(std::move(space), time, c)};
}

}  // namespace geoattn::lorentz
