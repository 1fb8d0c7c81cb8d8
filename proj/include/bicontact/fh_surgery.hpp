#pragma once

/**
 * @file fh_surgery.hpp
 * @brief Contact surgery along a Legendrian knot in the chart (t, s, w) with
 * gamma = dt + w ds.
 *
 * The annulus {t = 0, |w| <= eps} is cut and reglued by G(s, w) = (s + g(w), w)
 * with g rising from 0 to 2 pi q. On t >= 0 the form becomes
 * gamma~ = gamma - dh, h = lambda(t) J(w), J(w) = int_{-eps}^{w} x g'(x) dx.
 */

#include <cmath>
#include <sstream>
#include <string>

#include "bicontact/chart_map.hpp"
#include "bicontact/contact.hpp"
#include "bicontact/grid.hpp"
#include "bicontact/profile.hpp"

namespace bicontact {

struct FhSurgery {
    int q = 1;
    double eps = 0.0;           // annulus half-width in w
    double lambda_width = 0.0;  // lambda drops from 1 to 0 on [0, lambda_width]
    ShearProfile g = ShearProfile::foulon(1, 1.0);
    CutoffProfile lambda = CutoffProfile::near_linear(1.0);
    ChartPtr chart;
    OneForm gamma;
    OneForm deformed;
    ScalarField h;
    SampleBox box;  // the deformed side t >= 0
    ChartMap transition;
    VerificationReport contact;

    /// 1 - dh/dt, the coefficient of gamma~ ^ d gamma~ against the positive volume.
    double coefficient(const Point<double>& p) const { return 1.0 - h.gradient(p)[0]; }
};

/// Builds the deformed form and checks it is a positive contact form on the
/// deformed side. A failing check is recorded, not thrown.
inline FhSurgery fh_surgery(int q, double eps, double lambda_width, const GridSpec& grid = GridSpec::cube(32),
                            double cap_fraction = 0.1) {
    if (!(eps > 0.0 && lambda_width > 0.0)) throw InvariantError("annulus and cutoff widths must be positive");
    FhSurgery out;
    out.q = q;
    out.eps = eps;
    out.lambda_width = lambda_width;
    out.g = ShearProfile::foulon(q, eps);
    out.lambda = CutoffProfile::near_linear(lambda_width, cap_fraction);
    out.chart = make_fh_chart({-lambda_width, 1.25 * lambda_width}, {-eps, eps});
    const auto zero = ScalarField::constant(0.0);
    out.gamma = make_one_form(out.chart, ScalarField::constant(1.0), ScalarField::coordinate(2), zero);
    out.h = out.lambda.of_coordinate(0) * out.g.moment().of_coordinate(2);
    out.deformed = out.gamma - exterior_derivative(out.h, out.chart);
    out.box = SampleBox::of(*out.chart).with(0, {0.0, lambda_width});
    const ShearProfile shear = out.g;
    out.transition = ChartMap(out.chart, out.chart, TripleField([shear](const auto& p) {
                                  using T = std::decay_t<decltype(p[0])>;
                                  return Vec3<T>{p[0], p[1] + shear.f().eval(p[2]), p[2]};
                              }));
    out.contact = verify_contact(out.deformed, +1, grid, out.box, "gamma~ positive contact");
    return out;
}

/// Max |G^*(gamma~) - gamma| on the annulus t = 0.
inline VerificationReport fh_seam_residual(const FhSurgery& fh, const GridSpec& grid, double tol = 1e-9) {
    const OneForm pulled = pullback_oneform(fh.transition, fh.deformed);
    GridSpec fg = grid;
    fg.counts[0] = 2;
    return sweep_upper(
        "seam: G^*(gamma~) = gamma", fh.box.with(0, {0.0, 0.0}), fg,
        [&](const Point<double>& p) {
            const auto a = pulled.at(p), b = fh.gamma.at(p);
            double r = 0.0;
            for (std::size_t i = 0; i < 3; ++i) r = std::max(r, std::abs(a[i] - b[i]));
            return r;
        },
        tol);
}

struct FhReebCheck {
    /// max |R(gamma~) - R(gamma) / (1 - dh(R(gamma)))| over the deformed side.
    VerificationReport residual;
    /// Same with the rescaling 1 / (1 + dh(R)).
    double plus_sign_residual = 0.0;
    double scale_min = 0.0;
    double scale_max = 0.0;
};

/// Compares the Reeb field of gamma~ with the rescaled R = d/dt.
inline FhReebCheck fh_reeb_check(const FhSurgery& fh, const GridSpec& grid, double tol = 1e-7) {
    const VectorField r_new = reeb_field(fh.deformed);
    const VectorField r_old = reeb_field(fh.gamma);
    FhReebCheck out;
    out.scale_min = std::numeric_limits<double>::infinity();
    out.scale_max = -std::numeric_limits<double>::infinity();
    out.residual = sweep_upper(
        "reeb: R~ = R / (1 - dh(R))", fh.box, grid,
        [&](const Point<double>& p) {
            const auto a = r_new.at(p);
            const auto r = r_old.at(p);
            const auto dh = fh.h.gradient(p);
            const double dhr = dh[0] * r[0] + dh[1] * r[1] + dh[2] * r[2];
            const double scale = 1.0 / (1.0 - dhr);
            const double alt = 1.0 / (1.0 + dhr);
            out.scale_min = std::min(out.scale_min, scale);
            out.scale_max = std::max(out.scale_max, scale);
            double e = 0.0, e_alt = 0.0;
            for (std::size_t i = 0; i < 3; ++i) {
                e = std::max(e, std::abs(a[i] - scale * r[i]));
                e_alt = std::max(e_alt, std::abs(a[i] - alt * r[i]));
            }
            out.plus_sign_residual = std::max(out.plus_sign_residual, e_alt);
            return e;
        },
        tol);
    std::ostringstream os;
    os.precision(6);
    os << "scale in [" << out.scale_min << ", " << out.scale_max << "]; residual with 1/(1+dh(R)) "
       << out.plus_sign_residual;
    out.residual.note = os.str();
    return out;
}

}  // namespace bicontact
