#pragma once

/**
 * @file contact.hpp
 * @brief Contact conditions, Reeb fields, bi-contact pairs and the
 * quadrant (dynamical positivity) certificate.
 */

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bicontact/errors.hpp"
#include "bicontact/forms.hpp"
#include "bicontact/grid.hpp"

namespace bicontact {

/// alpha ^ d alpha divided by the chart's positive volume form.
inline ScalarField contact_coefficient(const OneForm& a) { return wedge_contact(a).coefficient(); }

/// Checks sign * (alpha ^ d alpha) > grid.margin_floor on the grid.
/// `sign` is +1 for a positive and -1 for a negative contact form.
inline VerificationReport verify_contact(const OneForm& a, int sign, const GridSpec& grid,
                                         std::optional<SampleBox> box = std::nullopt, std::string name = {}) {
    if (sign != 1 && sign != -1) throw InvariantError("contact sign must be +1 or -1");
    const ScalarField c = contact_coefficient(a);
    const SampleBox b = box ? *box : SampleBox::of(*a.chart());
    if (name.empty()) name = sign > 0 ? "positive contact" : "negative contact";
    auto r = sweep_lower(std::move(name), b, grid, [&](const Point<double>& p) { return sign * c.value(p); },
                         grid.margin_floor);
    std::ostringstream os;
    os.precision(10);
    os << "extremum of the contact coefficient " << sign * r.value;
    r.note = os.str();
    return r;
}

/// Relative size of alpha ^ d alpha below which a Reeb field is refused.
inline constexpr double degenerate_tolerance = 1e-12;

/// The Reeb field: the kernel direction of d alpha (the curl of the
/// coefficients) normalized by alpha. Throws DegeneratePointError where
/// |alpha . curl alpha| is negligible against |alpha| |curl alpha|.
inline VectorField reeb_field(const OneForm& a, double tol = degenerate_tolerance) {
    const TripleField c = a.coeffs();
    return make_vector_field(a.chart(), [c, tol](const auto& p) {
        using T = std::decay_t<decltype(p[0])>;
        const auto r = c(seed(p));
        const Vec3<T> val{r[0].v, r[1].v, r[2].v};
        const Vec3<T> curl{r[2].d[1] - r[1].d[2], r[0].d[2] - r[2].d[0], r[1].d[0] - r[0].d[1]};
        const T vol = dot(val, curl);
        const Point<double> at = values_of(p);
        const double scale = std::max(1.0, std::sqrt(value_of(dot(val, val)) * value_of(dot(curl, curl))));
        if (!(std::abs(value_of(vol)) > tol * scale)) {
            std::ostringstream os;
            os.precision(10);
            os << "contact form degenerates at (" << at[0] << ", " << at[1] << ", " << at[2]
               << "): alpha ^ d alpha = " << value_of(vol);
            throw DegeneratePointError(os.str(), at);
        }
        const T inv = T(1.0) / vol;
        return Vec3<T>{curl[0] * inv, curl[1] * inv, curl[2] * inv};
    });
}

/// Sine of the angle between ker a and ker b at one point, |a x b|/(|a||b|).
inline double kernel_angle(const Vec3<double>& a, const Vec3<double>& b, const Point<double>& where) {
    const double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) {
        std::ostringstream os;
        os << "one-form vanishes at (" << where[0] << ", " << where[1] << ", " << where[2] << ")";
        throw DegeneratePointError(os.str(), where);
    }
    return norm(cross(a, b)) / (na * nb);
}

/// Grid minimum of the kernel angle; > floor certifies transversality.
inline VerificationReport transversality_report(const OneForm& a, const OneForm& b, const GridSpec& grid,
                                                std::optional<SampleBox> box = std::nullopt) {
    const SampleBox sb = box ? *box : SampleBox::of(*a.chart());
    return sweep_lower(
        "transversality", sb, grid, [&](const Point<double>& p) { return kernel_angle(a.at(p), b.at(p), p); },
        grid.margin_floor);
}

inline double transversality_margin(const OneForm& a, const OneForm& b, const GridSpec& grid,
                                    std::optional<SampleBox> box = std::nullopt) {
    return transversality_report(a, b, grid, box).value;
}

/// An ordered pair (negative contact form, positive contact form).
class BiContact {
public:
    BiContact() = default;
    BiContact(OneForm alpha_minus, OneForm alpha_plus)
        : minus_(std::move(alpha_minus)), plus_(std::move(alpha_plus)) {}

    const OneForm& alpha_minus() const { return minus_; }
    const OneForm& alpha_plus() const { return plus_; }
    const ChartPtr& chart() const { return minus_.chart(); }

    /// Direction of ker alpha_- cap ker alpha_+, oriented as
    /// alpha_+ x alpha_- (coefficient vectors).
    VectorField line_field() const {
        const TripleField a = minus_.coeffs();
        const TripleField c = plus_.coeffs();
        return make_vector_field(chart(), [a, c](const auto& p) { return cross(c(p), a(p)); });
    }

    /// Both contact signs and transversality on the grid.
    std::vector<VerificationReport> validate(const GridSpec& grid, std::optional<SampleBox> box = std::nullopt) const {
        std::vector<VerificationReport> out;
        out.push_back(verify_contact(minus_, -1, grid, box, "alpha_- negative contact"));
        out.push_back(verify_contact(plus_, +1, grid, box, "alpha_+ positive contact"));
        out.push_back(transversality_report(minus_, plus_, grid, box));
        return out;
    }

private:
    OneForm minus_;
    OneForm plus_;
};

enum class Quadrant { I, II, III, IV, on_xi_minus, on_xi_plus, along_X };

inline const char* to_string(Quadrant q) {
    switch (q) {
        case Quadrant::I: return "I";
        case Quadrant::II: return "II";
        case Quadrant::III: return "III";
        case Quadrant::IV: return "IV";
        case Quadrant::on_xi_minus: return "on_xi_minus";
        case Quadrant::on_xi_plus: return "on_xi_plus";
        case Quadrant::along_X: return "along_X";
    }
    return "?";
}

/// Relative threshold under which alpha(Y) counts as zero:
/// |alpha(Y)| <= tol * |Y| * |alpha|.
inline constexpr double quadrant_tolerance = 1e-6;

struct QuadrantOptions {
    double tol = quadrant_tolerance;
    /// Reverse the orientation of alpha_+ (swaps I <-> II and III <-> IV).
    bool flip_orientation = false;
};

namespace detail {
struct SignPair {
    double minus;  // alpha_-(Y) / (|Y| |alpha_-|)
    double plus;   // alpha_+(Y) / (|Y| |alpha_+|)
};

inline SignPair normalized_pair(const Vec3<double>& y, const Vec3<double>& am, const Vec3<double>& ap,
                                const Point<double>& p, bool flip) {
    const double ny = norm(y);
    if (ny == 0.0) throw DegeneratePointError("cannot classify the zero vector", p);
    const double nm = norm(am), np = norm(ap);
    if (nm == 0.0 || np == 0.0) throw DegeneratePointError("one-form vanishes", p);
    return {dot(am, y) / (ny * nm), (flip ? -1.0 : 1.0) * dot(ap, y) / (ny * np)};
}

inline Quadrant classify(const SignPair& s, double tol) {
    const bool zm = std::abs(s.minus) <= tol;
    const bool zp = std::abs(s.plus) <= tol;
    if (zm && zp) return Quadrant::along_X;
    if (zm) return Quadrant::on_xi_minus;
    if (zp) return Quadrant::on_xi_plus;
    if (s.minus > 0) return s.plus > 0 ? Quadrant::I : Quadrant::IV;
    return s.plus > 0 ? Quadrant::II : Quadrant::III;
}
}  // namespace detail

/// Quadrant of the vector y at p from the sign pair (alpha_-(y), alpha_+(y)):
/// I = (+,+), II = (-,+), III = (-,-), IV = (+,-).
inline Quadrant classify_vector(const Vec3<double>& y, const BiContact& bi, const Point<double>& p,
                                QuadrantOptions opt = {}) {
    const auto s = detail::normalized_pair(y, bi.alpha_minus().at(p), bi.alpha_plus().at(p), p, opt.flip_orientation);
    return detail::classify(s, opt.tol);
}

inline Quadrant classify_vector(const VectorField& y, const BiContact& bi, const Point<double>& p,
                                QuadrantOptions opt = {}) {
    return classify_vector(y.at(p), bi, p, opt);
}

/// Predicate selecting where R_{alpha_-} may lie on xi_+ instead of in
/// quadrant I or III. An empty predicate allows it everywhere.
using Region = std::function<bool(const Point<double>&)>;

inline Region box_region(const SampleBox& box, double slack = 1e-12) {
    return [box, slack](const Point<double>& p) {
        for (std::size_t i = 0; i < 3; ++i)
            if (!box.ranges[i].contains(p[i], slack)) return false;
        return true;
    };
}

struct HozooriResult {
    /// Lower-bound report on the per-point score: the normalized product
    /// alpha_-(R) alpha_+(R) for quadrants I and III, the unused part of the
    /// zero band for exempt points on xi_+, and a negative value for every
    /// rejected point.
    VerificationReport report;
    /// max |alpha_pm(X)| / (|X| |alpha_pm|) over the grid.
    VerificationReport flow_in_kernels;
    std::array<std::size_t, 7> counts{};  // indexed by Quadrant
    Point<double> first_rejected{};
    std::optional<Quadrant> first_rejected_class;

    bool pass() const { return report.pass && flow_in_kernels.pass; }
    std::size_t count(Quadrant q) const { return counts[static_cast<std::size_t>(q)]; }
};

/// Sufficient Anosov certificate: R_{alpha_-} dynamically positive (I or
/// III) at every sample, or on xi_+ inside `special_region`.
inline HozooriResult hozoori_certificate(const BiContact& bi, const VectorField& x, const GridSpec& grid,
                                         std::optional<SampleBox> box = std::nullopt, Region special_region = {},
                                         QuadrantOptions opt = {}) {
    const SampleBox sb = box ? *box : SampleBox::of(*bi.chart());
    const VectorField r = reeb_field(bi.alpha_minus());
    HozooriResult out;
    out.report = sweep_lower(
        "hozoori: R(alpha_-) dynamically positive", sb, grid,
        [&](const Point<double>& p) {
            const auto s = detail::normalized_pair(r.at(p), bi.alpha_minus().at(p), bi.alpha_plus().at(p), p,
                                                   opt.flip_orientation);
            const Quadrant q = detail::classify(s, opt.tol);
            ++out.counts[static_cast<std::size_t>(q)];
            double score;
            if (q == Quadrant::I || q == Quadrant::III) {
                score = s.minus * s.plus;
            } else if (q == Quadrant::on_xi_plus && (!special_region || special_region(p))) {
                score = opt.tol - std::abs(s.plus);
                if (!(score > 0.0)) score = std::numeric_limits<double>::min();
            } else {
                score = std::min(s.minus * s.plus, -opt.tol);
            }
            if (score <= 0.0 && !out.first_rejected_class) {
                out.first_rejected_class = q;
                out.first_rejected = p;
            }
            return score;
        },
        0.0);
    out.report.pass = out.report.value > 0.0;
    {
        std::ostringstream os;
        os << "quadrant tolerance " << opt.tol << "; counts:";
        for (std::size_t i = 0; i < out.counts.size(); ++i)
            os << " " << to_string(static_cast<Quadrant>(i)) << "=" << out.counts[i];
        out.report.note = os.str();
    }
    out.flow_in_kernels = sweep_upper(
        "flow in both kernels", sb, grid,
        [&](const Point<double>& p) {
            const auto y = x.at(p);
            const auto s = detail::normalized_pair(y, bi.alpha_minus().at(p), bi.alpha_plus().at(p), p, false);
            return std::max(std::abs(s.minus), std::abs(s.plus));
        },
        opt.tol);
    return out;
}

/// Certificate for the pair's own line field.
inline HozooriResult hozoori_certificate(const BiContact& bi, const GridSpec& grid,
                                         std::optional<SampleBox> box = std::nullopt, Region special_region = {},
                                         QuadrantOptions opt = {}) {
    return hozoori_certificate(bi, bi.line_field(), grid, std::move(box), std::move(special_region), opt);
}

struct IsotopyResult {
    std::vector<OneForm> forms;
    std::vector<VerificationReport> reports;  // contact and kernel check per accepted step
    bool truncated = false;
    /// Index of the first interpolant that failed, when truncated.
    int failed_step = -1;
};

/// Average of b over the periodic first coordinate, as a field of (v, w).
inline ScalarField s_average(const ScalarField& b, int samples = 64) {
    return ScalarField([b, samples](const auto& p) {
        using T = std::decay_t<decltype(p[0])>;
        T acc(0.0);
        for (int k = 0; k < samples; ++k) {
            const Point<T> q{T(two_pi * k / samples), p[1], p[2]};
            acc = acc + b(q);
        }
        return acc * (1.0 / samples);
    });
}

/// Linear homotopy from ds - b dv to ds - bbar dv, bbar the s-average of b.
/// Every interpolant is checked for the positive contact condition and for
/// d/dw (the Reeb field of dw + v ds) in its kernel; the sequence stops at
/// the first failure.
inline IsotopyResult s_average_isotopy(const ChartPtr& chart, const ScalarField& b, int steps, const GridSpec& grid,
                                       std::optional<SampleBox> box = std::nullopt) {
    if (steps < 1) throw InvariantError("isotopy needs at least one step");
    const ScalarField bbar = s_average(b);
    const SampleBox sb = box ? *box : SampleBox::of(*chart);
    IsotopyResult out;
    for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const ScalarField bt = (1.0 - t) * b + t * bbar;
        OneForm a = make_one_form(chart, ScalarField::constant(1.0), -bt, ScalarField::constant(0.0));
        std::ostringstream name;
        name << "interpolant " << k << "/" << steps;
        auto contact = verify_contact(a, +1, grid, sb, name.str() + " positive contact");
        auto kernel = sweep_upper(
            name.str() + " d/dw in kernel", sb, grid, [&](const Point<double>& p) { return std::abs(a.at(p)[2]); },
            grid.zero_tol);
        const bool ok = contact.pass && kernel.pass;
        out.reports.push_back(std::move(contact));
        out.reports.push_back(std::move(kernel));
        if (!ok) {
            out.truncated = true;
            out.failed_step = k;
            break;
        }
        out.forms.push_back(std::move(a));
    }
    return out;
}

}  // namespace bicontact
