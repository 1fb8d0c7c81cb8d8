#pragma once

/**
 * @file run.hpp
 * @brief The commands behind the command-line tool.
 *
 * Exit codes: 0 all checks pass, 1 a verified inequality failed, 2 a
 * configuration or runtime error.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bicontact/cli/config.hpp"
#include "bicontact/contact.hpp"
#include "bicontact/expression.hpp"
#include "bicontact/fh_surgery.hpp"
#include "bicontact/goodman.hpp"
#include "bicontact/models.hpp"
#include "bicontact/report.hpp"
#include "bicontact/slope.hpp"
#include "bicontact/surgery.hpp"

namespace bicontact::cli {

enum ExitCode { exit_pass = 0, exit_fail = 1, exit_error = 2 };

struct RunOptions {
    std::optional<int> grid;
    std::optional<std::string> out_dir;
    std::uint64_t seed = 1;
    bool quiet = false;
};

inline bool is_command(const std::string& c) {
    return c == "verify" || c == "surgery" || c == "slope" || c == "holonomy" || c == "report";
}

namespace detail {

/// Collects checks and tracks the overall verdict.
struct Section {
    Json checks = Json::array();
    bool pass = true;

    void add(const VerificationReport& r) {
        checks.push_back(to_json(r));
        pass = pass && r.pass;
    }
    void add(const Json& j) {
        checks.push_back(j);
        pass = pass && j.value("verdict", "fail") == "pass";
    }
};

inline FlowBoxModel flow_box_of(const RunConfig& c) {
    const GridSpec g = c.grid.spec();
    if (c.model.name == "flow_box") {
        auto chart = make_flow_box_chart({-c.model.delta, c.model.delta}, {-c.model.eps, c.model.eps});
        return flow_box_bicontact(parse_scalar_field(c.model.b, chart), c.model.delta, c.model.eps, c.model.delta, g);
    }
    if (c.model.name == "lambda") return LambdaModel().as_flow_box(c.model.delta, c.model.eps, g);
    throw InvariantError("model \"" + c.model.name + "\" has no flow box");
}

inline Json verify(const RunConfig& c, const RunOptions& o, bool& pass) {
    const GridSpec g = c.grid.spec();
    Json j;
    j["model"] = c.model.name;
    Section s;
    if (c.model.name == "lambda") {
        LambdaModel m;
        for (const auto& r : m.bir_relations(g, c.grid.zero_tol)) s.add(r);
        for (const auto& r : m.flow_in_kernels(g, c.grid.zero_tol)) s.add(r);
        for (const auto& r : m.bicontact().validate(g)) s.add(r);
        const ScalarField d = m.divergence_x();
        s.add(sweep_upper(
            "div X against e^{v^2} dV", SampleBox::of(*m.chart()), g,
            [&](const Point<double>& p) { return std::abs(d.value(p)); }, 1e-8));
        const auto pts = random_points(SampleBox::of(*m.chart()), static_cast<std::size_t>(c.grid.random_points), o.seed);
        const VectorField* frame[] = {&m.frame().V, &m.frame().H, &m.frame().X};
        const OneForm* forms[] = {&m.alpha_minus(), &m.alpha_plus(), &m.beta_plus()};
        const char* names[] = {"reeb(alpha_-) = V", "reeb(alpha_+) = H", "reeb(beta_+) = X"};
        for (int i = 0; i < 3; ++i) {
            const VectorField r = reeb_field(*forms[i]);
            s.add(sweep_upper(
                names[i], pts,
                [&](const Point<double>& p) {
                    const auto a = r.at(p), b = frame[i]->at(p);
                    return std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]), std::abs(a[2] - b[2])});
                },
                1e-8));
        }
        const auto h = hozoori_certificate(m.bicontact(), m.frame().X, g);
        s.add(h.report);
        s.add(h.flow_in_kernels);
        Json br = Json::array();
        for (const auto& b : m.bracket_relations(pts)) br.push_back(to_json(b));
        j["structure_equations"] = br;
        j["structure_equations_note"] = "recorded with their empirical sign; not part of the verdict";
    } else if (c.model.name == "flow_box") {
        const auto m = flow_box_of(c);
        for (const auto& r : m.reports) s.add(r);
        const auto h = hozoori_certificate(m.bicontact(), g);
        s.add(h.report);
        s.add(h.flow_in_kernels);
    } else {
        const auto t = t3_bicontact(c.model.n, c.model.m, c.model.t3_eps, g);
        for (const auto& r : t.reports) s.add(r);
        j["anosov_claim"] = "none";
    }
    j["checks"] = s.checks;
    j["verdict"] = s.pass ? "pass" : "fail";
    pass = s.pass;
    return j;
}

inline Json surgery(const RunConfig& c, bool& pass, std::vector<std::string>& warnings) {
    const GridSpec g = c.grid.spec();
    const auto& sc = c.surgery;
    Json j;
    Section s;
    if (sc.kind == "fh") {
        const auto fh = fh_surgery(sc.q, sc.eps, sc.lambda_width, g, sc.cap_fraction);
        Json spec;
        spec["kind"] = "fh";
        spec["q"] = sc.q;
        spec["eps"] = sc.eps;
        spec["lambda_width"] = sc.lambda_width;
        j["spec"] = spec;
        s.add(fh.contact);
        s.add(fh_seam_residual(fh, g, c.grid.seam_tol));
        if (fh.contact.pass) s.add(fh_reeb_check(fh, g).residual);
        j["checks"] = s.checks;
        j["verdict"] = s.pass ? "pass" : "fail";
        pass = s.pass;
        return j;
    }
    const auto model = flow_box_of(c);
    SurgerySpec spec = make_surgery_spec(sc.q, c.surgery_delta(), sc.eps, sc.side, sc.cap_fraction);
    if (sc.cutoff2 == "weighted") {
        if (sc.q > 0) throw InvariantError("the weighted cutoff is for q <= 0");
        const auto ext = negative_twist_extension(sc.q, model, spec.delta, sc.eps, g);
        spec.cutoff2 = *ext.cutoff;
        Json e;
        e["check"] = "c * M_f < 1";
        e["max"] = ext.ratio;
        e["tolerance"] = 1.0;
        e["verdict"] = ext.feasible ? "pass" : "fail";
        j["extension"] = e;
    }
    SurgeryOptions opt;
    opt.grid = g;
    opt.seam_tol = c.grid.seam_tol;
    const auto glued = lt_surgery(spec, model, opt);
    if (c.warnings.empty())
        for (const auto& w : glued.warnings) warnings.push_back(w);
    j["bundle"] = to_json(glued);
    for (const auto& r : glued.reports) s.add(r);
    s.add(support_report(glued, g));
    s.add(minus_coefficient_crosscheck(glued, g));
    if (glued.within_a_priori_bound) s.add(dh_dw_report(glued, g));
    if (sc.q > 0 && sc.cutoff2 == "near_linear") s.add(plus_strengthening_report(glued, g));
    if (glued.contact_pass())
        for (const auto& h : glued_hozoori(glued, g)) {
            s.add(h.report);
            s.add(h.flow_in_kernels);
        }
    if (j.contains("extension")) s.add(j["extension"]);
    j["checks"] = s.checks;
    j["verdict"] = s.pass ? "pass" : "fail";
    pass = s.pass;
    return j;
}

inline Json slope(const RunConfig& c, bool& pass) {
    BiContact bi;
    if (c.model.name == "lambda") bi = LambdaModel().bicontact();
    else bi = flow_box_of(c).bicontact();
    SlopeOptions opt;
    opt.steps = c.grid.slope_steps;
    const auto r = characteristic_slope(bi, c.model.delta, c.surgery.eps, opt);
    Json j = to_json(r);
    j["delta"] = c.model.delta;
    j["eps"] = c.surgery.eps;
    j["tolerance"] = 0.01 * r.k;
    const auto range = admissible_range_from_slope(r.k, r.uncertainty);
    if (range.all) j["q_min"] = "all";
    else j["q_min"] = range.q_min;
    pass = r.uncertainty < 0.01 * r.k;
    j["verdict"] = pass ? "pass" : "fail";
    return j;
}

inline Json holonomy(const RunConfig& c, const std::filesystem::path& dir, bool& pass) {
    const GridSpec g = c.grid.spec();
    const auto model = flow_box_of(c);
    const auto& sc = c.surgery;
    SurgerySpec spec = make_surgery_spec(sc.q, c.surgery_delta(), sc.eps, sc.side, sc.cap_fraction);
    if (sc.cutoff2 == "weighted") spec.cutoff2 = *negative_twist_extension(sc.q, model, spec.delta, sc.eps, g).cutoff;
    SurgeryOptions opt;
    opt.grid = g;
    opt.seam_tol = c.grid.seam_tol;
    const auto glued = lt_surgery(spec, model, opt);
    GoodmanOptions go;
    go.fan = c.grid.fan;
    go.steps = c.grid.steps;
    go.record_every = std::max(1, c.grid.steps / 64);
    const auto r = goodman_twist_count(glued, go);
    std::ofstream csv(dir / c.output.curves);
    if (!csv) throw Error("cannot write " + (dir / c.output.curves).string());
    write_curves_csv(csv, r);
    Json j = to_json(r, -sc.q, go.integrality_tol);
    j["curves"] = c.output.curves;
    j["contact"] = glued.contact_pass() ? "pass" : "fail";
    pass = r.twist == -sc.q;
    return j;
}

}  // namespace detail

/// Runs one command; the JSON report goes to <dir>/<report>, a summary to `log`.
inline int run(const std::string& command, const RunConfig& config_in, const RunOptions& o, std::ostream& log,
               std::ostream& err) {
    RunConfig c = config_in;
    if (o.grid) c.grid.n = *o.grid;
    if (o.out_dir) c.output.dir = *o.out_dir;
    if (!is_command(command)) {
        err << "unknown command \"" << command << "\"\n";
        return exit_error;
    }
    if (c.grid.n < 2) {
        err << "grid must be at least 2\n";
        return exit_error;
    }
    const std::filesystem::path dir(c.output.dir);
    Json report;
    report["command"] = command;
    std::vector<std::string> warnings = c.warnings;
    bool pass = true;
    try {
        std::filesystem::create_directories(dir);
        bool ok = true;
        if (command == "verify" || command == "report") {
            report["verify"] = detail::verify(c, o, ok);
            pass = pass && ok;
        }
        const bool has_box = c.model.name != "t3";
        if (command == "surgery" || (command == "report" && c.surgery.present && (has_box || c.surgery.kind == "fh"))) {
            report["surgery"] = detail::surgery(c, ok, warnings);
            pass = pass && ok;
        }
        if (command == "slope" || (command == "report" && has_box)) {
            report["slope"] = detail::slope(c, ok);
            pass = pass && ok;
        }
        if (command == "holonomy" || (command == "report" && has_box && c.surgery.present && c.surgery.kind == "lt")) {
            report["holonomy"] = detail::holonomy(c, dir, ok);
            pass = pass && ok;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
    Json w = Json::array();
    for (const auto& x : warnings) w.push_back(x);
    report["warnings"] = w;
    report["verdict"] = pass ? "pass" : "fail";
    {
        std::ofstream out(dir / c.output.report);
        if (!out) {
            err << "error: cannot write " << (dir / c.output.report).string() << "\n";
            return exit_error;
        }
        out << report.dump(2) << "\n";
    }
    for (const auto& x : warnings) err << "warning: " << x << "\n";
    if (!o.quiet) {
        for (const char* key : {"verify", "surgery"}) {
            if (!report.contains(key)) continue;
            for (const auto& chk : report[key]["checks"]) {
                log << chk["verdict"].get<std::string>() << "  " << chk["check"].get<std::string>();
                if (chk.contains("min")) log << "  min " << chk["min"].dump();
                if (chk.contains("max")) log << "  max " << chk["max"].dump();
                if (chk.contains("argmin") && chk["verdict"] == "fail") log << " at " << chk["argmin"].dump();
                log << "  (tolerance " << chk["tolerance"].dump() << ")\n";
            }
        }
        if (report.contains("slope"))
            log << "slope k = " << report["slope"]["k"].dump() << " +- " << report["slope"]["uncertainty"].dump()
                << ", q_min = " << report["slope"]["q_min"].dump() << "\n";
        if (report.contains("holonomy"))
            log << "holonomy twist = " << report["holonomy"]["twist"].dump() << " (expected "
                << report["holonomy"]["expected"].dump() << ")\n";
        log << (pass ? "PASS" : "FAIL") << "  report: " << (dir / c.output.report).string() << "\n";
    }
    return pass ? exit_pass : exit_fail;
}

}  // namespace bicontact::cli
