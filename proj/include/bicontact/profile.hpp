#pragma once

/**
 * @file profile.hpp
 * @brief One-variable piecewise polynomial profiles: shears and cutoffs.
 *
 * Shears and cutoffs are built-in types rather than parsed expressions, so
 * their smoothness and exact derivative bounds live in code.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "bicontact/errors.hpp"
#include "bicontact/field.hpp"

namespace bicontact {

/// A function of one variable given by polynomial pieces in the local
/// variable (x - start). Outside the first/last breakpoint the first/last
/// piece is used (typically constants). Every derivative order is exact.
class PiecewisePoly {
public:
    struct Piece {
        double start;
        std::vector<double> coeffs;  // c0 + c1 (x-start) + c2 (x-start)^2 + ...
    };

    PiecewisePoly() = default;
    explicit PiecewisePoly(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
        if (pieces_.empty()) throw InvariantError("piecewise polynomial needs at least one piece");
        for (std::size_t i = 1; i < pieces_.size(); ++i)
            if (!(pieces_[i].start > pieces_[i - 1].start))
                throw InvariantError("piecewise polynomial breakpoints must increase");
    }

    /// k-th derivative at x.
    double derivative(double x, int k) const {
        const Piece& pc = piece_at(x);
        const double t = x - pc.start;
        double acc = 0.0;
        for (std::size_t n = pc.coeffs.size(); n-- > static_cast<std::size_t>(k);) {
            double falling = 1.0;
            for (int m = 0; m < k; ++m) falling *= static_cast<double>(n - m);
            acc = acc * t + pc.coeffs[n] * falling;
        }
        return acc;
    }

    double operator()(double x) const { return derivative(x, 0); }

    /// Evaluate at any dual level, `order` derivatives deep.
    template <class T>
    T eval(const T& x, int order = 0) const {
        if constexpr (is_dual_v<T>) {
            using Inner = std::decay_t<decltype(x.v)>;
            const Inner f0 = eval(x.v, order);
            const Inner f1 = eval(x.v, order + 1);
            return T{f0, {f1 * x.d[0], f1 * x.d[1], f1 * x.d[2]}};
        } else {
            return derivative(x, order);
        }
    }

    const std::vector<Piece>& pieces() const { return pieces_; }

    /// Antiderivative vanishing at the first breakpoint; pieces stay
    /// continuous across breakpoints.
    PiecewisePoly integral() const {
        std::vector<Piece> out;
        double running = 0.0;
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const auto& pc = pieces_[i];
            Piece q{pc.start, {running}};
            for (std::size_t n = 0; n < pc.coeffs.size(); ++n) q.coeffs.push_back(pc.coeffs[n] / double(n + 1));
            if (i + 1 < pieces_.size()) {
                const double len = pieces_[i + 1].start - pc.start;
                double acc = 0.0;
                for (std::size_t n = q.coeffs.size(); n-- > 0;) acc = acc * len + q.coeffs[n];
                running = acc;
            }
            out.push_back(std::move(q));
        }
        return PiecewisePoly(std::move(out));
    }

    /// x * p(x), piece by piece.
    PiecewisePoly times_x() const {
        std::vector<Piece> out;
        for (const auto& pc : pieces_) {
            // x = start + t
            Piece q{pc.start, std::vector<double>(pc.coeffs.size() + 1, 0.0)};
            for (std::size_t n = 0; n < pc.coeffs.size(); ++n) {
                q.coeffs[n] += pc.start * pc.coeffs[n];
                q.coeffs[n + 1] += pc.coeffs[n];
            }
            out.push_back(std::move(q));
        }
        return PiecewisePoly(std::move(out));
    }

    PiecewisePoly derivative_poly() const {
        std::vector<Piece> out;
        for (const auto& pc : pieces_) {
            Piece q{pc.start, {}};
            for (std::size_t n = 1; n < pc.coeffs.size(); ++n) q.coeffs.push_back(pc.coeffs[n] * double(n));
            if (q.coeffs.empty()) q.coeffs.push_back(0.0);
            out.push_back(std::move(q));
        }
        return PiecewisePoly(std::move(out));
    }

    /// Field p(x_i) (reflect: p(-x_i)).
    ScalarField of_coordinate(int i, bool reflect = false) const {
        PiecewisePoly self = *this;
        const double sgn = reflect ? -1.0 : 1.0;
        return ScalarField([self, i, sgn](const auto& p) { return self.eval(p[i] * sgn); });
    }

private:
    const Piece& piece_at(double x) const {
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                                   [](double val, const Piece& pc) { return val < pc.start; });
        if (it == pieces_.begin()) return pieces_.front();
        return *std::prev(it);
    }

    std::vector<Piece> pieces_;
};

namespace detail {
/// Coefficients of total * S((x - a)/width) in powers of (x - a), S the
/// quintic smoothstep 6u^5 - 15u^4 + 10u^3.
inline std::vector<double> smoothstep_coeffs(double total, double width) {
    const double w3 = width * width * width;
    return {0.0, 0.0, 0.0, 10.0 * total / w3, -15.0 * total / (w3 * width), 6.0 * total / (w3 * width * width)};
}
}  // namespace detail

/// Dehn-twist shear: monotone C^2 step from 0 at x <= -half_width to `total`
/// at x >= half_width, the quintic smoothstep in between.
class ShearProfile {
public:
    /// Shear f for the tangent-annulus surgery: f = 0 on (-inf,-delta],
    /// f = -2 pi q on [delta, inf).
    static ShearProfile legendrian(int q, double delta) { return ShearProfile(q, delta, -two_pi_q(q)); }

    /// Shear g for the transverse-annulus (Foulon-Hasselblatt) surgery:
    /// g(-eps) = 0, g(eps) = 2 pi q.
    static ShearProfile foulon(int q, double eps) { return ShearProfile(q, eps, two_pi_q(q)); }

    int q() const { return q_; }
    double half_width() const { return half_width_; }
    double total() const { return total_; }

    const PiecewisePoly& f() const { return f_; }
    const PiecewisePoly& f_prime() const { return fp_; }

    /// sup |f'| = (15/8) * |total| / (2 * half_width).
    double max_slope() const { return 15.0 / 8.0 * std::abs(total_) / (2.0 * half_width_); }

    /// The integral from -half_width to x of y f'(y) dy.
    const PiecewisePoly& moment() const { return moment_; }

private:
    static double two_pi_q(int q) { return 2.0 * std::numbers::pi * q; }

    ShearProfile(int q, double half_width, double total) : q_(q), half_width_(half_width), total_(total) {
        if (!(half_width > 0.0)) throw InvariantError("shear half-width must be positive");
        const double a = -half_width;
        f_ = PiecewisePoly({{a - 1.0, {0.0}},
                            {a, detail::smoothstep_coeffs(total, 2.0 * half_width)},
                            {half_width, {total}}});
        fp_ = f_.derivative_poly();
        moment_ = fp_.times_x().integral();
        // first piece starts at a - 1 where the integrand is 0, so the
        // antiderivative already vanishes on (-inf, -half_width]
    }

    int q_;
    double half_width_;
    double total_;
    PiecewisePoly f_;
    PiecewisePoly fp_;
    PiecewisePoly moment_;
};

/// Monotone cutoff: 1 for x <= 0, 0 for x >= width, derivative <= 0.
///
/// The standard shape is a C^1 near-linear ramp with quadratic caps of
/// length cap_fraction * width at each end, so sup |lambda'| equals
/// 1 / (width (1 - cap_fraction)).
///
/// The weighted shape realizes lambda'(w) = -c * d b/d w for an
/// s- and v-independent b, c = 1 / (b(width) - b(0)); it is only Lipschitz at
/// the ends of the ramp.
class CutoffProfile {
public:
    enum class Kind { near_linear, weighted };

    static CutoffProfile near_linear(double width, double cap_fraction = 0.1) {
        if (!(width > 0.0)) throw InvariantError("cutoff width must be positive");
        if (!(cap_fraction > 0.0 && cap_fraction < 0.5)) throw InvariantError("cap fraction must lie in (0, 1/2)");
        const double cap = cap_fraction * width;
        const double slope = 1.0 / (width - cap);  // |lambda'| on the linear part
        const double k = slope / cap;             // |lambda''| on the caps
        const double lin_start = cap;
        const double lin_end = width - cap;
        const double at_lin_start = 1.0 - 0.5 * k * cap * cap;
        const double at_lin_end = at_lin_start - slope * (lin_end - lin_start);
        CutoffProfile out;
        out.kind_ = Kind::near_linear;
        out.width_ = width;
        out.cap_fraction_ = cap_fraction;
        out.max_slope_ = slope;
        out.poly_ = PiecewisePoly({{-1.0, {1.0}},
                                   {0.0, {1.0, 0.0, -0.5 * k}},
                                   {lin_start, {at_lin_start, -slope}},
                                   {lin_end, {at_lin_end, -slope, 0.5 * k}},
                                   {width, {0.0}}});
        return out;
    }

    /// Cutoff whose slope is proportional to the rotation d b/d w of the
    /// positive contact plane; `b` must depend on w only.
    static CutoffProfile weighted(double width, ScalarField b) {
        if (!(width > 0.0)) throw InvariantError("cutoff width must be positive");
        const double b0 = b.value({0.0, 0.0, 0.0});
        const double b1 = b.value({0.0, 0.0, width});
        if (!(b1 - b0 > 0.0)) throw InvariantError("weighted cutoff needs b(width) > b(0)");
        CutoffProfile out;
        out.kind_ = Kind::weighted;
        out.width_ = width;
        out.weight_ = 1.0 / (b1 - b0);
        out.b_ = std::move(b);
        out.b0_ = b0;
        // sup |lambda'| = c * sup_{[0,width]} b'(w); b' is sampled here for
        // reporting only
        double best = 0.0;
        const int n = 2001;
        for (int i = 0; i < n; ++i) {
            const double w = width * i / (n - 1);
            best = std::max(best, out.b_.gradient({0.0, 0.0, w})[2]);
        }
        out.max_slope_ = out.weight_ * best;
        return out;
    }

    Kind kind() const { return kind_; }
    double width() const { return width_; }
    double cap_fraction() const { return cap_fraction_; }
    /// sup |lambda'|.
    double max_slope() const { return max_slope_; }
    /// Proportionality constant c of the weighted shape.
    double weight() const { return weight_; }

    /// lambda(x) and its derivatives (near-linear shape only).
    const PiecewisePoly& poly() const { return poly_; }

    double value(double x) const {
        if (kind_ == Kind::near_linear) return poly_(x);
        return weighted_eval(x);
    }

    double slope(double x) const {
        if (kind_ == Kind::near_linear) return poly_.derivative(x, 1);
        return weighted_eval(D1{x, {1.0, 0.0, 0.0}}).d[0];
    }

    /// lambda(x_i) as a field on the chart (reflect: lambda(-x_i)).
    ScalarField of_coordinate(int i, bool reflect = false) const {
        if (kind_ == Kind::near_linear) return poly_.of_coordinate(i, reflect);
        CutoffProfile self = *this;
        const double sgn = reflect ? -1.0 : 1.0;
        return ScalarField([self, i, sgn](const auto& p) { return self.weighted_eval(p[i] * sgn); });
    }

private:
    template <class T>
    T weighted_eval(const T& x) const {
        const double xv = value_of(x);
        if (xv <= 0.0) return T(1.0);
        if (xv >= width_) return T(0.0);
        const Point<T> q{T(0.0), T(0.0), x};
        return T(1.0) - (b_(q) - b0_) * weight_;
    }

    Kind kind_ = Kind::near_linear;
    double width_ = 0.0;
    double cap_fraction_ = 0.0;
    double max_slope_ = 0.0;
    double weight_ = 0.0;
    double b0_ = 0.0;
    PiecewisePoly poly_;
    ScalarField b_;
};

}  // namespace bicontact
