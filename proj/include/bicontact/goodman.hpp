#pragma once

/**
 * @file goodman.hpp
 * @brief Holonomy twist of a surgered flow box.
 *
 * A fan of starting points on C_in = {v = tau}, w0 in [-eps, eps], is pushed
 * along the line field to C_out = {v = -tau}, once for the original pair and
 * once for the glued one. s is tracked without wrapping; a trajectory of the
 * glued flow that changes sides of the cut is moved through the seam map.
 * The starting curve on the upper side is lifted through the seam as well,
 * so the fan is a connected curve in the glued box. The twist is the change
 * of total s-displacement across the fan in units of 2 pi.
 */

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "bicontact/surgery.hpp"

namespace bicontact {

struct GoodmanOptions {
    int fan = 33;      // curves in the fan (odd puts one on the cut)
    int steps = 4096;  // RK4 steps over the transit
    double integrality_tol = 0.05;
    /// Keep every n-th point of each glued trajectory (0: endpoints only).
    int record_every = 0;
};

struct FanCurve {
    double w0 = 0.0;
    Point<double> original{};  // endpoint on C_out, s unwrapped
    Point<double> surgered{};
    int seam_crossings = 0;
    std::vector<Point<double>> path;  // glued trajectory, s unwrapped
};

struct GoodmanResult {
    int twist = 0;
    double raw = 0.0;  // before rounding
    double integrality_error = 0.0;
    std::vector<FanCurve> curves;
};

namespace detail {
/// Y / (-Y_v) on the side selected by sign(w): v decreases at unit rate.
inline Point<double> transit_rhs(const VectorField& field, const Point<double>& p) {
    const auto y = field.at(p);
    if (!(std::abs(y[1]) > 1e-14)) {
        std::ostringstream os;
        os << "flow is tangent to a v-slice at (" << p[0] << ", " << p[1] << ", " << p[2] << ")";
        throw DegeneratePointError(os.str(), p);
    }
    const double k = -1.0 / y[1];
    return {y[0] * k, y[1] * k, y[2] * k};
}

/// Pushes p from v = tau to v = -tau. `upper_field` and `lower_field` are
/// used on w >= 0 and w < 0; `shift(v)` maps lower s to upper s across the
/// cut (0 for the unglued flow).
template <class Shift>
Point<double> transit(const VectorField& upper_field, const VectorField& lower_field, Point<double> p, double tau,
                      int steps, const Interval& w_range, Shift&& shift, int* crossings,
                      std::vector<Point<double>>* path = nullptr, int every = 0) {
    const double h = 2.0 * tau / steps;
    bool upper = p[2] >= 0.0;
    if (path) path->push_back(p);
    for (int i = 0; i < steps; ++i) {
        const VectorField& f = upper ? upper_field : lower_field;
        p = rk4_step<3>([&](const Point<double>& q) { return transit_rhs(f, q); }, p, h);
        if (!w_range.contains(p[2], 1e-12)) {
            std::ostringstream os;
            os << "trajectory left the flow box through w=" << (p[2] > 0 ? w_range.hi : w_range.lo)
               << " at v=" << p[1];
            throw ChartExitError(os.str(), p[2] > 0 ? "w=hi" : "w=lo", 2.0 * tau - (p[1] + tau));
        }
        const bool now_upper = p[2] >= 0.0;
        if (now_upper != upper) {
            p[0] += now_upper ? shift(p[1]) : -shift(p[1]);
            if (crossings) ++*crossings;
            upper = now_upper;
        }
        if (path && ((i + 1) % every == 0 || i + 1 == steps)) path->push_back(p);
    }
    return p;
}
}  // namespace detail

/// Integer twist of the glued holonomy against the original one. Throws
/// InvariantError when the measured twist is not integral within tolerance.
inline GoodmanResult goodman_twist_count(const GluedBiContact& g, GoodmanOptions opt = {}) {
    if (opt.fan < 2 || opt.steps < 16) throw InvariantError("fan needs at least 2 curves and 16 steps");
    const double tau = g.model.tau;
    const double eps = g.spec.eps;
    const Interval wr = g.model.chart->range(2);
    const VectorField orig = g.model.flow();
    const VectorField up = g.upper.bicontact().line_field();
    const VectorField lo = g.lower.bicontact().line_field();
    const PiecewisePoly f = g.spec.shear.f();
    auto no_shift = [](double) { return 0.0; };
    auto shift = [&](double v) { return f(v); };

    GoodmanResult out;
    for (int i = 0; i < opt.fan; ++i) {
        FanCurve c;
        c.w0 = -eps + 2.0 * eps * i / (opt.fan - 1);
        const Point<double> start{0.0, tau, c.w0};
        c.original = detail::transit(orig, orig, start, tau, opt.steps, wr, no_shift, nullptr);
        Point<double> lifted = start;
        if (c.w0 >= 0.0) lifted[0] += f(tau);
        c.surgered = detail::transit(up, lo, lifted, tau, opt.steps, wr, shift, &c.seam_crossings,
                                       opt.record_every > 0 ? &c.path : nullptr, opt.record_every);
        out.curves.push_back(c);
    }
    const auto& top = out.curves.back();
    const auto& bot = out.curves.front();
    const double d_surg = top.surgered[0] - bot.surgered[0];
    const double d_orig = top.original[0] - bot.original[0];
    out.raw = (d_surg - d_orig) / two_pi;
    out.twist = static_cast<int>(std::lround(out.raw));
    out.integrality_error = std::abs(out.raw - out.twist);
    if (out.integrality_error > opt.integrality_tol) {
        std::ostringstream os;
        os << "holonomy twist " << out.raw << " is not an integer";
        throw InvariantError(os.str());
    }
    return out;
}

}  // namespace bicontact
