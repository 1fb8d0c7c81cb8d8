#pragma once

/**
 * @file models.hpp
 * @brief Concrete bi-contact models: the flow-box normal form, the chart
 * around a lifted closed geodesic (the "Lambda" chart) with its frame, and
 * the Mitsumatsu pair on the 3-torus.
 */

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bicontact/contact.hpp"
#include "bicontact/expression.hpp"
#include "bicontact/forms.hpp"
#include "bicontact/grid.hpp"

namespace bicontact {

// ---------------------------------------------------------------------------
// flow box

/// Flow box N around a tangent annulus: coordinates (s, v, w) with
/// alpha_- = dw + v ds and alpha_+ = ds - b dv, b(s, v, 0) = 0, db/dw > 0.
/// v spans [-tau, tau], w spans [-eps, eps]; delta <= tau is the width
/// reserved for the shear.
struct FlowBoxModel {
    double delta = 0.3;
    double eps = 0.5;
    double tau = 0.3;
    ScalarField b;
    ChartPtr chart;
    OneForm alpha_minus;
    OneForm alpha_plus;
    std::vector<VerificationReport> reports;

    BiContact bicontact() const { return {alpha_minus, alpha_plus}; }
    /// The flow direction alpha_+ x alpha_- = (-b, -1, b v).
    VectorField flow() const { return bicontact().line_field(); }
};

/// Builds and validates the flow-box model. Throws InvariantError with the
/// offending location when b(s, v, 0) != 0 or db/dw <= 0 on the grid.
inline FlowBoxModel flow_box_bicontact(ScalarField b, double delta, double eps, double tau = 0.0,
                                       const GridSpec& grid = GridSpec::cube(16)) {
    if (tau <= 0.0) tau = delta;
    if (!(delta > 0.0 && eps > 0.0)) throw InvariantError("flow box half-widths must be positive");
    if (delta > tau) throw InvariantError("shear width delta exceeds the box half-width tau");
    FlowBoxModel m;
    m.delta = delta;
    m.eps = eps;
    m.tau = tau;
    m.b = b;
    m.chart = make_flow_box_chart({-tau, tau}, {-eps, eps});
    const auto zero = ScalarField::constant(0.0);
    const auto one = ScalarField::constant(1.0);
    m.alpha_minus = make_one_form(m.chart, ScalarField::coordinate(1), zero, one);
    m.alpha_plus = make_one_form(m.chart, one, -b, zero);

    const SampleBox box = SampleBox::of(*m.chart);
    auto at_zero = sweep_upper(
        "b(s,v,0) = 0", box.with(2, {0.0, 0.0}), GridSpec{{grid.counts[0], grid.counts[1], 2}},
        [&](const Point<double>& p) { return std::abs(b.value(p)); }, grid.zero_tol);
    if (!at_zero.pass) {
        std::ostringstream os;
        os << "b does not vanish on w = 0: |b| = " << at_zero.value << " at " << m.chart->describe(at_zero.argmin);
        throw InvariantError(os.str());
    }
    auto rotation = sweep_lower(
        "db/dw > 0", box, grid, [&](const Point<double>& p) { return b.gradient(p)[2]; }, 0.0);
    if (!rotation.pass) {
        std::ostringstream os;
        os << "db/dw must be positive: " << rotation.value << " at " << m.chart->describe(rotation.argmin);
        throw InvariantError(os.str());
    }
    m.reports.push_back(std::move(at_zero));
    m.reports.push_back(std::move(rotation));
    for (auto& r : m.bicontact().validate(grid)) m.reports.push_back(std::move(r));
    return m;
}

/// Default shape b = tan w.
inline FlowBoxModel flow_box_bicontact(double delta, double eps, double tau = 0.0,
                                       const GridSpec& grid = GridSpec::cube(16)) {
    if (!(eps < std::numbers::pi / 2)) throw InvariantError("b = tan w needs eps < pi/2");
    auto chart = make_flow_box_chart({-1.0, 1.0}, {-1.0, 1.0});
    return flow_box_bicontact(parse_scalar_field("tan(w)", chart), delta, eps, tau, grid);
}

// ---------------------------------------------------------------------------
// Lambda chart

struct Frame {
    VectorField V, H, X, e_plus, e_minus;
};

/// Empirical sign of one bracket relation [A, B] = sign * C.
struct BracketRecord {
    std::string relation;  // e.g. "[V,X] = H"
    int sign = 0;          // +1, -1, or 0 when neither sign fits
    double residual = 0.0;  // max |[A,B] - sign C| over the sample points
    double tolerance = 0.0;
    bool pass = false;
};

/// The chart around a lifted closed geodesic: alpha_- = dw + v ds,
/// alpha_+ = e^{v^2/2}(cos w ds - sin w dv), beta_+ = e^{v^2/2}(-sin w ds - cos w dv).
/// V, H, X are the Reeb fields of alpha_-, alpha_+, beta_+.
class LambdaModel {
public:
    /// w-parameter of the closed orbit (v = 0, w = pi/2).
    static constexpr double eps_gamma = std::numbers::pi / 2;

    LambdaModel(Interval v_range, Interval w_range) : chart_(make_flow_box_chart(v_range, w_range)) {
        alpha_minus_ = make_one_form(chart_, [](const auto& p) {
            using T = std::decay_t<decltype(p[0])>;
            return Vec3<T>{p[1], T(0.0), T(1.0)};
        });
        alpha_plus_ = make_one_form(chart_, [](const auto& p) {
            using T = std::decay_t<decltype(p[0])>;
            const T e = exp(p[1] * p[1] * 0.5);
            return Vec3<T>{e * cos(p[2]), -e * sin(p[2]), T(0.0)};
        });
        beta_plus_ = make_one_form(chart_, [](const auto& p) {
            using T = std::decay_t<decltype(p[0])>;
            const T e = exp(p[1] * p[1] * 0.5);
            return Vec3<T>{-e * sin(p[2]), -e * cos(p[2]), T(0.0)};
        });
        frame_.V = coordinate_field(chart_, 2);
        frame_.H = make_vector_field(chart_, [](const auto& p) {
            using T = std::decay_t<decltype(p[0])>;
            const T e = exp(p[1] * p[1] * -0.5);
            return Vec3<T>{e * cos(p[2]), -e * sin(p[2]), -e * p[1] * cos(p[2])};
        });
        frame_.X = make_vector_field(chart_, [](const auto& p) {
            using T = std::decay_t<decltype(p[0])>;
            const T e = exp(p[1] * p[1] * -0.5);
            return Vec3<T>{-e * sin(p[2]), -e * cos(p[2]), e * p[1] * sin(p[2])};
        });
        frame_.e_plus = frame_.V + frame_.H;
        frame_.e_minus = frame_.V - frame_.H;
    }

    /// Default window |v| <= 1, |w| <= pi/2 + 0.5 (contains the closed orbit).
    LambdaModel() : LambdaModel({-1.0, 1.0}, {-std::numbers::pi / 2 - 0.5, std::numbers::pi / 2 + 0.5}) {}

    const ChartPtr& chart() const { return chart_; }
    const OneForm& alpha_minus() const { return alpha_minus_; }
    const OneForm& alpha_plus() const { return alpha_plus_; }
    const OneForm& beta_plus() const { return beta_plus_; }
    const Frame& frame() const { return frame_; }
    BiContact bicontact() const { return {alpha_minus_, alpha_plus_}; }

    /// Density of the X-invariant volume beta_+ ^ d beta_+ = e^{v^2} dV.
    static ScalarField invariant_density() {
        return ScalarField([](const auto& p) { return exp(p[1] * p[1]); });
    }

    /// The seven pointwise relations alpha_+(V) = alpha_-(H) = beta_+(V) =
    /// beta_+(H) = 0 and beta_+(X) = alpha_+(H) = alpha_-(V) = 1.
    std::vector<VerificationReport> bir_relations(const GridSpec& grid, double tol = 1e-9) const {
        struct Rel {
            const char* name;
            const OneForm* form;
            const VectorField* field;
            double target;
        };
        const Rel rels[] = {
            {"alpha_+(V) = 0", &alpha_plus_, &frame_.V, 0.0}, {"alpha_-(H) = 0", &alpha_minus_, &frame_.H, 0.0},
            {"beta_+(V) = 0", &beta_plus_, &frame_.V, 0.0},   {"beta_+(H) = 0", &beta_plus_, &frame_.H, 0.0},
            {"beta_+(X) = 1", &beta_plus_, &frame_.X, 1.0},   {"alpha_+(H) = 1", &alpha_plus_, &frame_.H, 1.0},
            {"alpha_-(V) = 1", &alpha_minus_, &frame_.V, 1.0},
        };
        const SampleBox box = SampleBox::of(*chart_);
        std::vector<VerificationReport> out;
        for (const auto& r : rels) {
            out.push_back(sweep_upper(
                r.name, box, grid,
                [&](const Point<double>& p) { return std::abs(dot(r.form->at(p), r.field->at(p)) - r.target); },
                tol));
        }
        return out;
    }

    /// X lies in both contact planes: alpha_-(X) = alpha_+(X) = 0.
    std::vector<VerificationReport> flow_in_kernels(const GridSpec& grid, double tol = 1e-9) const {
        const SampleBox box = SampleBox::of(*chart_);
        std::vector<VerificationReport> out;
        out.push_back(sweep_upper(
            "alpha_-(X) = 0", box, grid,
            [&](const Point<double>& p) { return std::abs(dot(alpha_minus_.at(p), frame_.X.at(p))); }, tol));
        out.push_back(sweep_upper(
            "alpha_+(X) = 0", box, grid,
            [&](const Point<double>& p) { return std::abs(dot(alpha_plus_.at(p), frame_.X.at(p))); }, tol));
        return out;
    }

    /// Structure equations [V,X] = H, [H,X] = V, [H,V] = X, each tested
    /// against both signs at the given points.
    std::vector<BracketRecord> bracket_relations(const std::vector<Point<double>>& points, double tol = 1e-7) const {
        struct Rel {
            const char* name;
            const VectorField* a;
            const VectorField* b;
            const VectorField* target;
        };
        const Rel rels[] = {{"[V,X] = H", &frame_.V, &frame_.X, &frame_.H},
                            {"[H,X] = V", &frame_.H, &frame_.X, &frame_.V},
                            {"[H,V] = X", &frame_.H, &frame_.V, &frame_.X}};
        std::vector<BracketRecord> out;
        for (const auto& r : rels) out.push_back(record_bracket(r.name, *r.a, *r.b, *r.target, points, tol));
        return out;
    }

    /// [X, e^pm] = pm e^pm up to a recorded sign.
    std::vector<BracketRecord> stable_unstable_relations(const std::vector<Point<double>>& points,
                                                          double tol = 1e-7) const {
        return {record_bracket("[X,e+] = e+", frame_.X, frame_.e_plus, frame_.e_plus, points, tol),
                record_bracket("[X,e-] = -e-", frame_.X, frame_.e_minus, -frame_.e_minus, points, tol)};
    }

    static BracketRecord record_bracket(const std::string& name, const VectorField& a, const VectorField& b,
                                        const VectorField& target, const std::vector<Point<double>>& points,
                                        double tol) {
        const VectorField br = lie_bracket(a, b);
        double plus = 0.0, minus = 0.0;
        for (const auto& p : points) {
            const auto x = br.at(p), t = target.at(p);
            plus = std::max(plus, norm({x[0] - t[0], x[1] - t[1], x[2] - t[2]}));
            minus = std::max(minus, norm({x[0] + t[0], x[1] + t[1], x[2] + t[2]}));
        }
        BracketRecord rec;
        rec.relation = name;
        rec.tolerance = tol;
        rec.residual = std::min(plus, minus);
        rec.pass = rec.residual <= tol;
        rec.sign = rec.pass ? (plus <= minus ? +1 : -1) : 0;
        return rec;
    }

    /// Divergence of X against the invariant volume e^{v^2} dV.
    ScalarField divergence_x() const { return divergence(frame_.X, invariant_density()); }

    /// The same pair in flow-box form, b = tan w (kernel of alpha_+ equals
    /// ker(ds - tan w dv) on |w| < pi/2).
    FlowBoxModel as_flow_box(double delta, double eps, const GridSpec& grid = GridSpec::cube(16)) const {
        return flow_box_bicontact(delta, eps, delta, grid);
    }

private:
    ChartPtr chart_;
    OneForm alpha_minus_, alpha_plus_, beta_plus_;
    Frame frame_;
};

inline LambdaModel lambda_chart(Interval v_range, Interval w_range) { return LambdaModel(v_range, w_range); }

// ---------------------------------------------------------------------------
// T^3

/// alpha_+ = cos(2 n pi z) dx - sin(2 n pi z) dy + eps(z) dz and
/// alpha_- = cos(2 m pi z) dx + sin(2 m pi z) dy on the unit 3-torus.
struct T3Model {
    int n = 1;
    int m = 1;
    ScalarField eps_profile;
    ChartPtr chart;
    OneForm alpha_minus;
    OneForm alpha_plus;
    std::vector<VerificationReport> reports;

    BiContact bicontact() const { return {alpha_minus, alpha_plus}; }
    bool valid() const {
        for (const auto& r : reports)
            if (!r.pass) return false;
        return true;
    }
};

/// Builds the pair and validates it on the grid: both contact conditions
/// and a positive transversality margin. A failed margin is reported (with
/// the offending sample), not thrown.
inline T3Model t3_bicontact(int n, int m, ScalarField eps_profile, const GridSpec& grid = GridSpec::cube(64)) {
    if (n < 1 || m < 1) throw InvariantError("t3 model needs n, m >= 1");
    T3Model t;
    t.n = n;
    t.m = m;
    t.eps_profile = eps_profile;
    t.chart = make_t3_chart();
    const double kn = two_pi * n, km = two_pi * m;
    t.alpha_plus = make_one_form(t.chart, [kn, eps_profile](const auto& p) {
        using T = std::decay_t<decltype(p[0])>;
        return Vec3<T>{cos(p[2] * kn), -sin(p[2] * kn), eps_profile(p)};
    });
    t.alpha_minus = make_one_form(t.chart, [km](const auto& p) {
        using T = std::decay_t<decltype(p[0])>;
        return Vec3<T>{cos(p[2] * km), sin(p[2] * km), T(0.0)};
    });
    t.reports = t.bicontact().validate(grid);
    return t;
}

inline T3Model t3_bicontact(int n, int m, double eps_const, const GridSpec& grid = GridSpec::cube(64)) {
    return t3_bicontact(n, m, ScalarField::constant(eps_const), grid);
}

// ---------------------------------------------------------------------------
// curves

/// A closed parametrized curve theta in [0, 2 pi] -> chart.
struct EmbeddedCurve {
    ChartPtr chart;
    std::function<Point<double>(double)> point;
    std::function<Vec3<double>(double)> tangent;

    /// Distance between the endpoints modulo the periodic identifications.
    double closure_gap() const {
        const auto a = point(0.0), b = point(two_pi);
        double gap = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            double d = b[i] - a[i];
            if (chart->periodic(i)) d -= chart->period(i) * std::round(d / chart->period(i));
            gap = std::max(gap, std::abs(d));
        }
        return gap;
    }
};

struct PushoffResult {
    EmbeddedCurve curve;
    /// max |alpha_-(K')| along the curve (Legendrian for xi_-).
    VerificationReport legendrian;
    /// min |alpha_+(K')| along the curve (transverse to xi_+).
    VerificationReport transverse;
};

namespace detail {
inline PushoffResult pushoff(const ChartPtr& chart, const OneForm& am, const OneForm& ap, double w0, double tol) {
    PushoffResult out;
    out.curve.chart = chart;
    out.curve.point = [w0](double th) { return Point<double>{th, 0.0, w0}; };
    out.curve.tangent = [](double) { return Vec3<double>{1.0, 0.0, 0.0}; };
    std::vector<Point<double>> pts;
    const int n = 256;
    for (int k = 0; k < n; ++k) pts.push_back(out.curve.point(two_pi * k / n));
    out.legendrian = sweep_upper(
        "alpha_-(K') = 0", pts, [&](const Point<double>& p) { return std::abs(am.at(p)[0]); }, tol);
    VerificationReport tr;
    tr.check = "alpha_+(K') transverse";
    tr.bound = VerificationReport::Bound::lower;
    tr.tolerance = tol;
    tr.value = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
        const double val = std::abs(ap.at(p)[0]);
        ++tr.samples;
        if (val < tr.value) {
            tr.value = val;
            tr.argmin = p;
        }
    }
    tr.pass = tr.value > tol;
    out.transverse = tr;
    if (!out.transverse.pass) {
        std::ostringstream os;
        os << "push-off at w0 = " << w0 << " is not transverse to xi_+: margin " << tr.value;
        throw InvariantError(os.str());
    }
    return out;
}
}  // namespace detail

/// The s-circle at (v = 0, w = w0), checked Legendrian for xi_- and
/// transverse to xi_+.
inline PushoffResult legendrian_transverse_pushoff(const LambdaModel& model, double w0, double tol = 1e-9) {
    if (!(w0 >= 0.0 && w0 < LambdaModel::eps_gamma))
        throw InvariantError("push-off parameter must lie in [0, pi/2)");
    return detail::pushoff(model.chart(), model.alpha_minus(), model.alpha_plus(), w0, tol);
}

inline PushoffResult legendrian_transverse_pushoff(const FlowBoxModel& model, double w0, double tol = 1e-9) {
    if (!model.chart->range(2).contains(w0)) throw InvariantError("push-off parameter outside the flow box");
    return detail::pushoff(model.chart, model.alpha_minus, model.alpha_plus, w0, tol);
}

}  // namespace bicontact
