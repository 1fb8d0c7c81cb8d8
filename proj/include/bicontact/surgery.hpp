#pragma once

/**
 * @file surgery.hpp
 * @brief Legendrian-transverse surgery on a tangent annulus.
 *
 * The flow box is cut along A0 = {w = 0}. The two sides are reglued by the
 * shear F(s, v) = (s + f(v), v) from the lower face to the upper face, and
 * the forms are deformed near the cut so that F pulls the upper forms back
 * to the lower ones:
 *
 *     alpha~_- = alpha_- - dh,          h = lambda1(w) I(v),  I(v) = int_{-delta}^{v} x f'(x) dx
 *     alpha~_+ = ds - (b + lambda2(w) f'(v)) dv
 *
 * on the upper side ("above"); the mirrored deformation lives below the cut
 * for "below", and "split" puts half on each side.
 */

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bicontact/chart_map.hpp"
#include "bicontact/contact.hpp"
#include "bicontact/grid.hpp"
#include "bicontact/models.hpp"
#include "bicontact/profile.hpp"

namespace bicontact {

/// delta_max = 1 / (Lambda_max * 2 pi (|q| + 1)). With Lambda_max = 1/eps
/// this is eps / (2 pi (|q| + 1)).
inline double admissible_delta(int q, double eps, double lambda_max) {
    if (!(eps > 0.0)) throw InvariantError("eps must be positive");
    if (lambda_max * eps < 1.0 - 1e-12) throw InvariantError("a cutoff dropping from 1 to 0 over eps has slope >= 1/eps");
    return 1.0 / (lambda_max * two_pi * (std::abs(q) + 1));
}

/// Which side of the cut carries the deformation.
enum class DeformationSide { above, below, split };

inline const char* to_string(DeformationSide s) {
    switch (s) {
        case DeformationSide::above: return "above";
        case DeformationSide::below: return "below";
        case DeformationSide::split: return "split";
    }
    return "?";
}

struct SurgerySpec {
    int q = 1;
    double delta = 0.0;
    double eps = 0.5;
    ShearProfile shear = ShearProfile::legendrian(1, 1.0);
    CutoffProfile cutoff1 = CutoffProfile::near_linear(1.0);
    CutoffProfile cutoff2 = CutoffProfile::near_linear(1.0);
    DeformationSide side = DeformationSide::above;

    /// Amplitude of the deformation on the upper / lower side.
    double upper_amplitude() const {
        return side == DeformationSide::above ? 1.0 : side == DeformationSide::split ? 0.5 : 0.0;
    }
    double lower_amplitude() const {
        return side == DeformationSide::below ? 1.0 : side == DeformationSide::split ? 0.5 : 0.0;
    }

    /// The a priori bound on sup |dh/dw|: delta * Lambda_max * 2 pi (|q| + 1).
    double dh_bound() const { return delta * cutoff1.max_slope() * two_pi * (std::abs(q) + 1); }

    void validate() const {
        if (shear.q() != q || shear.half_width() != delta)
            throw InvariantError("shear profile does not match q and delta");
        if (!(eps > 0.0)) throw InvariantError("eps must be positive");
        if (cutoff1.width() > eps * (1 + 1e-12) || cutoff2.width() > eps * (1 + 1e-12))
            throw InvariantError("cutoff support exceeds eps");
    }
};

/// Spec with the quintic shear and near-linear cutoffs.
inline SurgerySpec make_surgery_spec(int q, double delta, double eps,
                                     DeformationSide side = DeformationSide::above, double cap_fraction = 0.1) {
    SurgerySpec s;
    s.q = q;
    s.delta = delta;
    s.eps = eps;
    s.shear = ShearProfile::legendrian(q, delta);
    s.cutoff1 = CutoffProfile::near_linear(eps, cap_fraction);
    s.cutoff2 = CutoffProfile::near_linear(eps, cap_fraction);
    s.side = side;
    return s;
}

/// The forms on one side of the cut.
struct SideForms {
    OneForm alpha_minus;
    OneForm alpha_plus;
    ScalarField h;           // alpha_minus = original - dh
    ScalarField sigma_coeff;  // alpha_plus = original - sigma_coeff dv
    SampleBox box;            // this side's half of the flow box
    BiContact bicontact() const { return {alpha_minus, alpha_plus}; }
};

struct GluedBiContact {
    FlowBoxModel model;
    SurgerySpec spec;
    ChartMap transition;  // lower face -> upper face
    SideForms lower;      // w <= 0
    SideForms upper;      // w >= 0
    bool within_a_priori_bound = false;
    std::vector<std::string> warnings;
    std::vector<VerificationReport> reports;

    const SideForms& side(bool upper_side) const { return upper_side ? upper : lower; }

    bool contact_pass() const {
        for (const auto& r : reports)
            if (r.check.find("contact") != std::string::npos && !r.pass) return false;
        return true;
    }

    /// -1 + dh/dw: the closed-form alpha~_- coefficient on one side.
    double closed_form_minus_coefficient(const Point<double>& p) const {
        const bool up = p[2] >= 0.0;
        return -1.0 + side(up).h.gradient(p)[2];
    }
};

struct SurgeryOptions {
    GridSpec grid = GridSpec::cube(32);
    double seam_tol = 1e-9;
    /// Drop sigma from alpha~_+ (regression guard for the seam check).
    bool include_sigma = true;
    /// Run verify_seam (throws on mismatch) during construction.
    bool verify = true;
};

namespace detail {
inline SideForms deform(const FlowBoxModel& m, const SurgerySpec& spec, bool upper, bool include_sigma) {
    const double amp = upper ? spec.upper_amplitude() : spec.lower_amplitude();
    const double sign = upper ? 1.0 : -1.0;
    const bool reflect = !upper;
    const ScalarField lam1 = spec.cutoff1.of_coordinate(2, reflect);
    const ScalarField lam2 = spec.cutoff2.of_coordinate(2, reflect);
    const ScalarField moment = spec.shear.moment().of_coordinate(1);
    const ScalarField fp = spec.shear.f_prime().of_coordinate(1);
    SideForms out;
    out.h = (sign * amp) * (lam1 * moment);
    out.sigma_coeff = include_sigma ? (sign * amp) * (lam2 * fp) : ScalarField::constant(0.0);
    const ScalarField zero = ScalarField::constant(0.0);
    out.alpha_minus = m.alpha_minus - exterior_derivative(out.h, m.chart);
    out.alpha_plus = m.alpha_plus - make_one_form(m.chart, zero, out.sigma_coeff, zero);
    const SampleBox full = SampleBox::of(*m.chart);
    const auto& wr = m.chart->range(2);
    out.box = full.with(2, upper ? Interval{0.0, wr.hi} : Interval{wr.lo, 0.0});
    out.box.periodic[0] = true;
    return out;
}
}  // namespace detail

/// Max componentwise |F^*(upper forms) - lower forms| on the w = 0 face.
/// Never throws for a mismatch.
inline VerificationReport seam_residual(const GluedBiContact& g, const GridSpec& grid, double tol = 1e-9) {
    const OneForm pm = pullback_oneform(g.transition, g.upper.alpha_minus);
    const OneForm pp = pullback_oneform(g.transition, g.upper.alpha_plus);
    const SampleBox face = SampleBox::of(*g.model.chart).with(2, {0.0, 0.0});
    GridSpec fg = grid;
    fg.counts[2] = 2;
    return sweep_upper(
        "seam: F^*(upper) = lower", face, fg,
        [&](const Point<double>& p) {
            const auto a = pm.at(p), b = g.lower.alpha_minus.at(p);
            const auto c = pp.at(p), d = g.lower.alpha_plus.at(p);
            double r = 0.0;
            for (std::size_t i = 0; i < 3; ++i) r = std::max({r, std::abs(a[i] - b[i]), std::abs(c[i] - d[i])});
            return r;
        },
        tol);
}

/// seam_residual that throws SeamMismatchError beyond tol.
inline VerificationReport verify_seam(const GluedBiContact& g, const GridSpec& grid, double tol = 1e-9) {
    auto r = seam_residual(g, grid, tol);
    if (!r.pass) {
        std::ostringstream os;
        os << "seam identity violated: residual " << r.value << " at " << g.model.chart->describe(r.argmin);
        throw SeamMismatchError(os.str());
    }
    return r;
}

/// Contact checks of both deformed forms on both sides.
inline std::vector<VerificationReport> glued_contact_reports(const GluedBiContact& g, const GridSpec& grid) {
    std::vector<VerificationReport> out;
    for (bool up : {false, true}) {
        const auto& sf = g.side(up);
        const std::string where = up ? " (w >= 0)" : " (w <= 0)";
        out.push_back(verify_contact(sf.alpha_minus, -1, grid, sf.box, "alpha~_- negative contact" + where));
        out.push_back(verify_contact(sf.alpha_plus, +1, grid, sf.box, "alpha~_+ positive contact" + where));
    }
    return out;
}

/// Builds the glued bi-contact structure and attaches the seam and contact
/// reports. Failing contact checks are returned as failed reports; a seam
/// mismatch throws SeamMismatchError.
inline GluedBiContact lt_surgery(const SurgerySpec& spec, const FlowBoxModel& model, SurgeryOptions opt = {}) {
    spec.validate();
    if (spec.delta > model.tau * (1 + 1e-12))
        throw InvariantError("shear width exceeds the flow box (delta > tau)");
    if (spec.eps > model.eps * (1 + 1e-12)) throw InvariantError("cutoff width exceeds the flow box (eps > box eps)");
    GluedBiContact g;
    g.model = model;
    g.spec = spec;
    g.transition = shear_map(model.chart, spec.shear);
    g.lower = detail::deform(model, spec, false, opt.include_sigma);
    g.upper = detail::deform(model, spec, true, opt.include_sigma);
    const double dmax = admissible_delta(spec.q, spec.eps, spec.cutoff1.max_slope());
    g.within_a_priori_bound = spec.delta < dmax;
    if (!g.within_a_priori_bound) {
        std::ostringstream os;
        os << "delta = " << spec.delta << " exceeds the a priori bound " << dmax
           << "; the grid check decides admissibility";
        g.warnings.push_back(os.str());
    }
    g.reports.push_back(opt.verify ? verify_seam(g, opt.grid, opt.seam_tol) : seam_residual(g, opt.grid, opt.seam_tol));
    for (auto& r : glued_contact_reports(g, opt.grid)) g.reports.push_back(std::move(r));
    return g;
}

/// Grid maximum of |dh/dw| over both sides.
inline VerificationReport dh_dw_report(const GluedBiContact& g, const GridSpec& grid) {
    VerificationReport best;
    for (bool up : {false, true}) {
        const auto& sf = g.side(up);
        auto r = sweep_upper(
            "sup |dh/dw| <= delta Lambda_max 2 pi (|q|+1)", sf.box, grid,
            [&](const Point<double>& p) { return std::abs(sf.h.gradient(p)[2]); }, g.spec.dh_bound());
        if (up == false || r.value > best.value) {
            r.samples += best.samples;
            best = r;
        } else {
            best.samples += r.samples;
        }
    }
    return best;
}

/// Max |wedge-pipeline coefficient - (-1 + dh/dw)| over both sides.
inline VerificationReport minus_coefficient_crosscheck(const GluedBiContact& g, const GridSpec& grid,
                                                       double tol = 1e-9) {
    VerificationReport best;
    best.value = -1.0;
    for (bool up : {false, true}) {
        const auto& sf = g.side(up);
        const ScalarField c = contact_coefficient(sf.alpha_minus);
        auto r = sweep_upper(
            "alpha~_- coefficient = -1 + dh/dw", sf.box, grid,
            [&](const Point<double>& p) { return std::abs(c.value(p) - (-1.0 + sf.h.gradient(p)[2])); }, tol);
        if (r.value > best.value) {
            r.samples += best.samples;
            best = r;
        } else {
            best.samples += r.samples;
        }
    }
    return best;
}

/// Pointwise comparison of the alpha~_+ coefficient with the undeformed one:
/// min over both sides of (deformed - original).
inline VerificationReport plus_strengthening_report(const GluedBiContact& g, const GridSpec& grid) {
    const ScalarField orig = contact_coefficient(g.model.alpha_plus);
    VerificationReport best;
    best.value = std::numeric_limits<double>::infinity();
    for (bool up : {false, true}) {
        const auto& sf = g.side(up);
        const ScalarField c = contact_coefficient(sf.alpha_plus);
        auto r = sweep_lower(
            "alpha~_+ coefficient >= original", sf.box, grid,
            [&](const Point<double>& p) { return c.value(p) - orig.value(p); }, -1e-12);
        if (r.value < best.value) {
            r.samples += best.samples;
            best = r;
        } else {
            best.samples += r.samples;
        }
    }
    return best;
}

/// Deformations vanish on the boundary faces |v| = tau and |w| = box eps.
inline VerificationReport support_report(const GluedBiContact& g, const GridSpec& grid, double tol = 1e-12) {
    const auto& chart = *g.model.chart;
    const SampleBox full = SampleBox::of(chart);
    std::vector<Point<double>> pts;
    const Interval vr = chart.range(1), wr = chart.range(2);
    for (double v : {vr.lo, vr.hi}) full.with(1, {v, v}).for_each({{grid.counts[0], 2, grid.counts[2]}}, [&](auto p) {
        pts.push_back(p);
    });
    for (double w : {wr.lo, wr.hi}) full.with(2, {w, w}).for_each({{grid.counts[0], grid.counts[1], 2}}, [&](auto p) {
        pts.push_back(p);
    });
    return sweep_upper(
        "deformation vanishes on the box boundary", pts,
        [&](const Point<double>& p) {
            const auto& sf = g.side(p[2] >= 0.0);
            const auto a = sf.alpha_minus.at(p), b = g.model.alpha_minus.at(p);
            const auto c = sf.alpha_plus.at(p), d = g.model.alpha_plus.at(p);
            double r = 0.0;
            for (std::size_t i = 0; i < 3; ++i) r = std::max({r, std::abs(a[i] - b[i]), std::abs(c[i] - d[i])});
            return r;
        },
        tol);
}

/// Hozoori certificate on each side of the glued structure.
inline std::vector<HozooriResult> glued_hozoori(const GluedBiContact& g, const GridSpec& grid,
                                                Region special_region = {}, QuadrantOptions opt = {}) {
    std::vector<HozooriResult> out;
    for (bool up : {false, true}) {
        const auto& sf = g.side(up);
        auto r = hozoori_certificate(sf.bicontact(), grid, sf.box, special_region, opt);
        r.report.check += up ? " (w >= 0)" : " (w <= 0)";
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// negative twists

struct NegativeTwistResult {
    bool feasible = false;
    /// c * M_f with c = 1 / (b(eps) - b(0)); feasible iff < 1.
    double ratio = 0.0;
    /// ratio when infeasible, 0 otherwise.
    double deficit = 0.0;
    /// The weighted lambda2 (present whenever eps admits one).
    std::optional<CutoffProfile> cutoff;
    std::optional<SurgerySpec> spec;
    /// Grid check of alpha~_+ on the deformed side (run when feasible, or
    /// always with `check_infeasible`).
    std::optional<VerificationReport> plus_report;
};

/// Chooses lambda2' = -c db/dw on [0, eps] for a w-only b; feasible iff
/// c * M_f < 1. The resulting lambda2 is continuous with kinks at 0 and eps.
inline NegativeTwistResult negative_twist_extension(int q, const FlowBoxModel& model, double delta, double eps,
                                                    const GridSpec& grid = GridSpec::cube(32),
                                                    bool check_infeasible = false) {
    if (q > 0) throw InvariantError("negative twist extension expects q <= 0");
    if (eps > model.eps * (1 + 1e-12)) throw InvariantError("eps exceeds the flow box");
    NegativeTwistResult out;
    auto shear = ShearProfile::legendrian(q, delta);
    if (q == 0) {
        out.feasible = true;
        auto spec = make_surgery_spec(0, delta, eps);
        out.spec = spec;
        out.cutoff = spec.cutoff2;
        return out;
    }
    auto lam2 = CutoffProfile::weighted(eps, model.b);
    out.cutoff = lam2;
    out.ratio = lam2.weight() * shear.max_slope();
    out.feasible = out.ratio < 1.0;
    out.deficit = out.feasible ? 0.0 : out.ratio;
    SurgerySpec spec = make_surgery_spec(q, delta, eps);
    spec.cutoff2 = lam2;
    out.spec = spec;
    if (out.feasible || check_infeasible) {
        SurgeryOptions opt;
        opt.grid = grid;
        const auto g = lt_surgery(spec, model, opt);
        out.plus_report = verify_contact(g.upper.alpha_plus, +1, grid, g.upper.box, "alpha~_+ positive contact (w >= 0)");
    }
    return out;
}

/// Smallest eps in [lo, hi] whose alpha~_+ grid check passes, by bisection
/// on the grid verdict. `make_model(eps)` supplies the flow box.
template <class MakeModel>
double negative_twist_transition(int q, double delta, double lo, double hi, MakeModel&& make_model,
                                 const GridSpec& grid = GridSpec::cube(24), int iterations = 30) {
    auto passes = [&](double eps) {
        const FlowBoxModel m = make_model(eps);
        auto r = negative_twist_extension(q, m, delta, eps, grid, true);
        return r.plus_report && r.plus_report->pass;
    };
    if (passes(lo)) return lo;
    if (!passes(hi)) return std::numeric_limits<double>::infinity();
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        (passes(mid) ? hi : lo) = mid;
    }
    return hi;
}

/// Lower bound on admissible twists from a characteristic slope k with
/// uncertainty u: the smallest integer strictly greater than -(k - u).
struct AdmissibleRange {
    bool all = false;  // k infinite: every q admissible
    int q_min = 0;
};

inline AdmissibleRange admissible_range_from_slope(double k, double uncertainty = 0.0) {
    if (std::isinf(k) && k > 0) return {true, std::numeric_limits<int>::min()};
    if (!(k > 0.0)) throw InvariantError("slope must be positive");
    const double kk = k - std::abs(uncertainty);
    return {false, static_cast<int>(std::floor(-kk)) + 1};
}

}  // namespace bicontact
