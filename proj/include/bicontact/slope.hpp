#pragma once

/**
 * @file slope.hpp
 * @brief Characteristic slope of xi_+ on the boundary torus of a flow box.
 *
 * The torus is the s-circle times a meridian loop in the (v, w) half-plane
 * w >= 0, traversed counterclockwise:
 *
 *     A0:    w = 0,     v from -delta to delta
 *     C_in:  v = delta, w from 0 to W(delta)
 *     top:   w = W(v),  v from delta to -delta
 *     C_out: v = -delta, w from W(-delta) to 0
 *
 * The top is the flow-spanned curve through (0, eps) unless a flat top
 * w = eps is requested. Along the meridian the leaf of the characteristic
 * foliation solves ds/dtheta = -alpha_+(T) / alpha_+(d/ds), and the slope is
 * k = -Delta s / (2 pi) per meridian lap.
 */

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "bicontact/contact.hpp"
#include "bicontact/errors.hpp"
#include "bicontact/flow.hpp"

namespace bicontact {

struct SlopeOptions {
    int steps = 2048;  // RK4 steps per face
    int laps = 1;
    bool flat_top = false;
    double singular_tol = 1e-12;
};

struct SlopeResult {
    double k = 0.0;
    double uncertainty = 0.0;  // |k_N - k_2N|
    double delta_s = 0.0;      // s gained over the laps
    std::array<double, 4> face_shift{};  // A0, C_in, top, C_out (first lap)
    double top_left = 0.0;   // W(-delta)
    double top_right = 0.0;  // W(delta)
};

namespace detail {
/// w on the flow-spanned top at v, from dw/dv = X_w / X_v through (0, eps).
inline double flow_top(const VectorField& x, double s, double eps, double v, int steps) {
    if (v == 0.0) return eps;
    const double h = v / steps;
    std::array<double, 1> w{eps};
    double vv = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double v0 = vv;
        auto rhs = [&](double at, const std::array<double, 1>& y) {
            const auto f = x.at({s, at, y[0]});
            if (!(std::abs(f[1]) > 1e-14)) {
                std::ostringstream os;
                os << "flow is tangent to the meridian plane at v=" << at << ", w=" << y[0];
                throw DegeneratePointError(os.str(), {s, at, y[0]});
            }
            return std::array<double, 1>{f[2] / f[1]};
        };
        const auto k1 = rhs(v0, w);
        const auto k2 = rhs(v0 + 0.5 * h, {w[0] + 0.5 * h * k1[0]});
        const auto k3 = rhs(v0 + 0.5 * h, {w[0] + 0.5 * h * k2[0]});
        const auto k4 = rhs(v0 + h, {w[0] + h * k3[0]});
        w[0] += h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        vv += h;
    }
    return w[0];
}

struct MeridianPoint {
    double v, w, dv, dw;  // position and d/dtheta
};

inline double leaf_rhs(const OneForm& ap, double s, const MeridianPoint& m, double tol) {
    const auto a = ap.at({s, m.v, m.w});
    const double num = a[1] * m.dv + a[2] * m.dw;
    if (std::abs(a[0]) <= tol) {
        std::ostringstream os;
        os << (std::abs(num) <= tol ? "singular point of the characteristic foliation"
                                    : "characteristic foliation is not a graph over the meridian")
           << " at (" << s << ", " << m.v << ", " << m.w << ")";
        throw DegeneratePointError(os.str(), {s, m.v, m.w});
    }
    return -num / a[0];
}

inline SlopeResult slope_at(const BiContact& bi, double delta, double eps, const SlopeOptions& opt) {
    const OneForm& ap = bi.alpha_plus();
    const VectorField x = bi.line_field();
    const int n = opt.steps;
    // top profile tabulated on a v grid including the RK4 midpoints
    std::vector<double> top_w(2 * n + 1), top_dw(2 * n + 1);
    for (int i = 0; i <= 2 * n; ++i) {
        const double v = delta - delta * i / n;
        if (opt.flat_top) {
            top_w[i] = eps;
            top_dw[i] = 0.0;
        } else {
            top_w[i] = flow_top(x, 0.0, eps, v, std::max(64, n / 4));
            const auto f = x.at({0.0, v, top_w[i]});
            top_dw[i] = f[2] / f[1];
        }
        if (!(top_w[i] > 0.0)) throw InvariantError("top face meets the cut");
    }
    SlopeResult out;
    out.top_right = top_w.front();
    out.top_left = top_w.back();
    // each face parametrized by theta in [0, 1]; table index 2 per step
    auto face_point = [&](int face, double theta, int idx) -> MeridianPoint {
        switch (face) {
            case 0: return {-delta + 2 * delta * theta, 0.0, 2 * delta, 0.0};
            case 1: return {delta, out.top_right * theta, 0.0, out.top_right};
            case 2: return {delta - 2 * delta * theta, top_w[idx], -2 * delta, -2 * delta * top_dw[idx]};
            default: return {-delta, out.top_left * (1.0 - theta), 0.0, -out.top_left};
        }
    };
    double s = 0.0;
    for (int lap = 0; lap < opt.laps; ++lap) {
        for (int face = 0; face < 4; ++face) {
            const double s0 = s;
            const double h = 1.0 / n;
            // the top table has spacing h/2 in theta
            for (int i = 0; i < n; ++i) {
                const double t0 = h * i;
                const int j = 2 * i;
                const double k1 = leaf_rhs(ap, s, face_point(face, t0, j), opt.singular_tol);
                const double k2 = leaf_rhs(ap, s + 0.5 * h * k1, face_point(face, t0 + 0.5 * h, j + 1), opt.singular_tol);
                const double k3 = leaf_rhs(ap, s + 0.5 * h * k2, face_point(face, t0 + 0.5 * h, j + 1), opt.singular_tol);
                const double k4 = leaf_rhs(ap, s + h * k3, face_point(face, t0 + h, j + 2), opt.singular_tol);
                s += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
            }
            if (lap == 0) out.face_shift[face] = s - s0;
        }
    }
    out.delta_s = s;
    out.k = -s / (two_pi * opt.laps);
    return out;
}
}  // namespace detail

/// Characteristic slope of ker alpha_+ on the torus around the cut of width
/// delta and height eps. Uncertainty from a step-halving comparison.
inline SlopeResult characteristic_slope(const BiContact& bi, double delta, double eps, SlopeOptions opt = {}) {
    if (!(delta > 0.0 && eps > 0.0)) throw InvariantError("delta and eps must be positive");
    if (opt.steps < 4 || opt.laps < 1) throw InvariantError("slope needs steps >= 4 and laps >= 1");
    auto coarse = detail::slope_at(bi, delta, eps, opt);
    opt.steps *= 2;
    auto fine = detail::slope_at(bi, delta, eps, opt);
    fine.uncertainty = std::abs(fine.k - coarse.k);
    return fine;
}

}  // namespace bicontact
