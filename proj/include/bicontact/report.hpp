#pragma once

/**
 * @file report.hpp
 * @brief JSON and CSV output for verification reports, glued structures and
 * holonomy fans.
 *
 * Reports keep insertion order and never include timings, so equal inputs
 * serialize to identical bytes.
 */

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bicontact/fh_surgery.hpp"
#include "bicontact/goodman.hpp"
#include "bicontact/grid.hpp"
#include "bicontact/slope.hpp"
#include "bicontact/surgery.hpp"

namespace bicontact {

using Json = nlohmann::ordered_json;

inline Json point_json(const Point<double>& p) { return Json::array({p[0], p[1], p[2]}); }

inline Json to_json(const VerificationReport& r) {
    Json j;
    j["check"] = r.check;
    j[r.bound == VerificationReport::Bound::lower ? "min" : "max"] = r.value;
    j["argmin"] = point_json(r.argmin);
    j["tolerance"] = r.tolerance;
    j["verdict"] = r.verdict();
    j["samples"] = r.samples;
    if (r.violation_count > 0) {
        j["violation_count"] = r.violation_count;
        Json v = Json::array();
        for (const auto& p : r.violations) v.push_back(point_json(p));
        j["violations"] = v;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

inline Json to_json(const BracketRecord& b) {
    Json j;
    j["check"] = b.relation;
    j["max"] = b.residual;
    j["sign"] = b.sign;
    j["tolerance"] = b.tolerance;
    j["verdict"] = b.pass ? "pass" : "fail";
    return j;
}

/// Profile values on a uniform grid over [lo, hi].
template <class F>
Json profile_samples(F&& f, double lo, double hi, int n = 9) {
    Json arr = Json::array();
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        arr.push_back(Json::array({x, f(x)}));
    }
    return arr;
}

inline Json to_json(const SurgerySpec& s) {
    Json j;
    j["q"] = s.q;
    j["delta"] = s.delta;
    j["eps"] = s.eps;
    j["side"] = to_string(s.side);
    j["shear_max_slope"] = s.shear.max_slope();
    j["cutoff1"] = s.cutoff1.kind() == CutoffProfile::Kind::near_linear ? "near_linear" : "weighted";
    j["cutoff2"] = s.cutoff2.kind() == CutoffProfile::Kind::near_linear ? "near_linear" : "weighted";
    j["cutoff1_max_slope"] = s.cutoff1.max_slope();
    j["cutoff2_max_slope"] = s.cutoff2.max_slope();
    return j;
}

/// Parameters, profile samples and every attached report.
inline Json to_json(const GluedBiContact& g) {
    Json j;
    j["spec"] = to_json(g.spec);
    Json m;
    m["delta"] = g.model.delta;
    m["eps"] = g.model.eps;
    m["tau"] = g.model.tau;
    j["model"] = m;
    const auto& s = g.spec;
    Json prof;
    prof["f"] = profile_samples([&](double x) { return s.shear.f()(x); }, -s.delta, s.delta);
    prof["f_prime"] = profile_samples([&](double x) { return s.shear.f_prime()(x); }, -s.delta, s.delta);
    prof["lambda1"] = profile_samples([&](double x) { return s.cutoff1.value(x); }, 0.0, s.eps);
    prof["lambda2"] = profile_samples([&](double x) { return s.cutoff2.value(x); }, 0.0, s.eps);
    j["profiles"] = prof;
    Json a;
    a["delta_max"] = admissible_delta(s.q, s.eps, s.cutoff1.max_slope());
    a["within_bound"] = g.within_a_priori_bound;
    j["a_priori"] = a;
    Json w = Json::array();
    for (const auto& x : g.warnings) w.push_back(x);
    j["warnings"] = w;
    Json reps = Json::array();
    for (const auto& r : g.reports) reps.push_back(to_json(r));
    j["reports"] = reps;
    return j;
}

inline Json to_json(const SlopeResult& r) {
    Json j;
    j["k"] = r.k;
    j["uncertainty"] = r.uncertainty;
    j["delta_s"] = r.delta_s;
    j["face_shift"] = Json::array({r.face_shift[0], r.face_shift[1], r.face_shift[2], r.face_shift[3]});
    return j;
}

inline Json to_json(const GoodmanResult& r, int expected, double tolerance) {
    Json j;
    j["check"] = "holonomy twist = -q";
    j["twist"] = r.twist;
    j["expected"] = expected;
    j["raw"] = r.raw;
    j["integrality_error"] = r.integrality_error;
    j["tolerance"] = tolerance;
    j["verdict"] = r.twist == expected ? "pass" : "fail";
    return j;
}

/// CSV rows curve_id,s,v,w,winding for each recorded fan trajectory;
/// s is wrapped into [0, 2 pi) and winding counts the whole turns.
inline void write_curves_csv(std::ostream& os, const GoodmanResult& r) {
    os << "curve_id,s,v,w,winding\n";
    os.precision(12);
    for (std::size_t id = 0; id < r.curves.size(); ++id) {
        for (const auto& p : r.curves[id].path) {
            const double turns = std::floor(p[0] / two_pi);
            os << id << "," << p[0] - turns * two_pi << "," << p[1] << "," << p[2] << ","
               << static_cast<long>(turns) << "\n";
        }
    }
}

}  // namespace bicontact
