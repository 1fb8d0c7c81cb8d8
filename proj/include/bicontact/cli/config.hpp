#pragma once

/**
 * @file config.hpp
 * @brief INI-style run configuration.
 *
 * Sections [model], [surgery], [grid], [output]; `key = value` lines;
 * `;` or `#` start a comment; values may be double-quoted. All problems are
 * collected with their line numbers before anything is computed.
 *
 *     [model]
 *     name = lambda          ; flow_box | lambda | t3   (required)
 *     b = tan(w)             ; flow_box only
 *     delta = 0.3            ; box half-width in v
 *     eps = 1.0              ; box half-width in w
 *     n = 1, m = 1, t3_eps = 0.1
 *
 *     [surgery]
 *     kind = lt              ; lt | fh
 *     q = 1
 *     eps = 0.5
 *     delta = auto           ; or a number; auto = fraction * admissible_delta
 *     fraction = 0.9
 *     side = above           ; above | below | split
 *     cap_fraction = 0.1
 *     cutoff2 = near_linear  ; near_linear | weighted
 *     lambda_width = 1.0     ; fh only
 *
 *     [grid]
 *     n = 16, zero_tol = 1e-9, margin_floor = 0, seam_tol = 1e-9,
 *     random_points = 1000, fan = 17, steps = 2048, slope_steps = 1024
 *
 *     [output]
 *     dir = ., report = report.json, curves = curves.csv
 */

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bicontact/errors.hpp"
#include "bicontact/surgery.hpp"

namespace bicontact::cli {

struct ConfigIssue {
    std::string section;
    std::string key;
    int line = 0;
    std::string message;

    std::string str() const {
        std::ostringstream os;
        os << "line " << line << ": [" << section << "]" << (key.empty() ? "" : " " + key) << ": " << message;
        return os.str();
    }
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues) : Error(join(issues)), issues_(std::move(issues)) {}
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<ConfigIssue>& v) {
        std::string s = std::to_string(v.size()) + " configuration error(s)";
        for (const auto& i : v) s += "\n  " + i.str();
        return s;
    }
    std::vector<ConfigIssue> issues_;
};

struct ModelConfig {
    std::string name;
    std::string b = "tan(w)";
    double delta = 0.3;
    double eps = 1.0;
    int n = 1;
    int m = 1;
    double t3_eps = 0.1;
};

struct SurgeryConfig {
    bool present = false;
    std::string kind = "lt";
    int q = 1;
    double eps = 0.5;
    std::optional<double> delta;  // empty: fraction * admissible_delta
    double fraction = 0.9;
    DeformationSide side = DeformationSide::above;
    double cap_fraction = 0.1;
    std::string cutoff2 = "near_linear";
    double lambda_width = 1.0;
};

struct GridConfig {
    int n = 16;
    double zero_tol = 1e-9;
    double margin_floor = 0.0;
    double seam_tol = 1e-9;
    int random_points = 1000;
    int fan = 17;
    int steps = 2048;
    int slope_steps = 1024;

    GridSpec spec() const {
        GridSpec g = GridSpec::cube(n);
        g.zero_tol = zero_tol;
        g.margin_floor = margin_floor;
        return g;
    }
};

struct OutputConfig {
    std::string dir = ".";
    std::string report = "report.json";
    std::string curves = "curves.csv";
};

struct RunConfig {
    ModelConfig model;
    SurgeryConfig surgery;
    GridConfig grid;
    OutputConfig output;
    std::vector<std::string> warnings;

    /// The shear width actually used by an LT surgery.
    double surgery_delta() const {
        if (surgery.delta) return *surgery.delta;
        const double lam = CutoffProfile::near_linear(surgery.eps, surgery.cap_fraction).max_slope();
        return surgery.fraction * admissible_delta(surgery.q, surgery.eps, lam);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Entry {
    std::string value;
    int line;
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

class Reader {
public:
    Reader(Sections& s, std::vector<ConfigIssue>& issues) : sections_(s), issues_(issues) {}

    void error(const std::string& sec, const std::string& key, int line, const std::string& msg) {
        issues_.push_back({sec, key, line, msg});
    }

    const Entry* find(const std::string& sec, const std::string& key) {
        auto s = sections_.find(sec);
        if (s == sections_.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        used_[sec].push_back(key);
        return &k->second;
    }

    void text(const std::string& sec, const std::string& key, std::string& out) {
        if (const Entry* e = find(sec, key)) out = e->value;
    }

    void real(const std::string& sec, const std::string& key, double& out) {
        const Entry* e = find(sec, key);
        if (!e) return;
        try {
            std::size_t used = 0;
            const double v = std::stod(e->value, &used);
            if (used != e->value.size() || !std::isfinite(v)) throw std::invalid_argument("");
            out = v;
        } catch (const std::exception&) {
            error(sec, key, e->line, "expected a number, got \"" + e->value + "\"");
        }
    }

    void integer(const std::string& sec, const std::string& key, int& out) {
        const Entry* e = find(sec, key);
        if (!e) return;
        try {
            std::size_t used = 0;
            const long v = std::stol(e->value, &used);
            if (used != e->value.size()) throw std::invalid_argument("");
            out = static_cast<int>(v);
        } catch (const std::exception&) {
            error(sec, key, e->line, "expected an integer, got \"" + e->value + "\"");
        }
    }

    int line_of(const std::string& sec, const std::string& key) {
        auto s = sections_.find(sec);
        if (s == sections_.end()) return 0;
        auto k = s->second.find(key);
        return k == s->second.end() ? 0 : k->second.line;
    }

    void check_unknown() {
        for (const auto& [sec, keys] : sections_)
            for (const auto& [key, e] : keys) {
                const auto& u = used_[sec];
                if (std::find(u.begin(), u.end(), key) == u.end()) error(sec, key, e.line, "unknown key");
            }
    }

private:
    Sections& sections_;
    std::vector<ConfigIssue>& issues_;
    std::map<std::string, std::vector<std::string>> used_;
};

}  // namespace detail

/// Parses and validates a configuration; throws ConfigError listing every
/// problem found.
inline RunConfig parse_config_text(const std::string& text) {
    std::vector<ConfigIssue> issues;
    detail::Sections sections;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    static const char* known[] = {"model", "surgery", "grid", "output"};
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (!quoted && (line[i] == ';' || line[i] == '#')) {
                line.resize(i);
                break;
            }
        }
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back({current, "", line_no, "malformed section header"});
                continue;
            }
            current = detail::trim(line.substr(1, line.size() - 2));
            if (std::find(std::begin(known), std::end(known), current) == std::end(known))
                issues.push_back({current, "", line_no, "unknown section"});
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({current, "", line_no, "expected key = value"});
            continue;
        }
        if (current.empty()) {
            issues.push_back({"", "", line_no, "key outside of any section"});
            continue;
        }
        const std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (sections[current].count(key)) {
            issues.push_back({current, key, line_no, "duplicate key"});
            continue;
        }
        sections[current][key] = {value, line_no};
    }

    RunConfig c;
    detail::Reader r(sections, issues);

    // [model]
    if (!sections.count("model")) {
        issues.push_back({"model", "", 0, "missing section"});
    } else if (!r.find("model", "name")) {
        issues.push_back({"model", "name", 0, "missing key"});
    }
    r.text("model", "name", c.model.name);
    r.text("model", "b", c.model.b);
    r.real("model", "delta", c.model.delta);
    r.real("model", "eps", c.model.eps);
    r.integer("model", "n", c.model.n);
    r.integer("model", "m", c.model.m);
    r.real("model", "t3_eps", c.model.t3_eps);
    if (!c.model.name.empty() && c.model.name != "flow_box" && c.model.name != "lambda" && c.model.name != "t3")
        r.error("model", "name", r.line_of("model", "name"), "unknown model \"" + c.model.name + "\"");
    if (!(c.model.delta > 0.0)) r.error("model", "delta", r.line_of("model", "delta"), "must be positive");
    if (!(c.model.eps > 0.0)) r.error("model", "eps", r.line_of("model", "eps"), "must be positive");
    if (c.model.n < 1) r.error("model", "n", r.line_of("model", "n"), "must be at least 1");
    if (c.model.m < 1) r.error("model", "m", r.line_of("model", "m"), "must be at least 1");

    // [surgery]
    c.surgery.present = sections.count("surgery") > 0;
    r.text("surgery", "kind", c.surgery.kind);
    r.integer("surgery", "q", c.surgery.q);
    r.real("surgery", "eps", c.surgery.eps);
    if (const auto* e = r.find("surgery", "delta"); e && e->value != "auto") {
        double d = 0.0;
        r.real("surgery", "delta", d);
        c.surgery.delta = d;
    }
    r.real("surgery", "fraction", c.surgery.fraction);
    std::string side = "above";
    r.text("surgery", "side", side);
    if (side == "above") c.surgery.side = DeformationSide::above;
    else if (side == "below") c.surgery.side = DeformationSide::below;
    else if (side == "split") c.surgery.side = DeformationSide::split;
    else r.error("surgery", "side", r.line_of("surgery", "side"), "expected above, below or split");
    r.real("surgery", "cap_fraction", c.surgery.cap_fraction);
    r.text("surgery", "cutoff2", c.surgery.cutoff2);
    r.real("surgery", "lambda_width", c.surgery.lambda_width);
    if (c.surgery.kind != "lt" && c.surgery.kind != "fh")
        r.error("surgery", "kind", r.line_of("surgery", "kind"), "expected lt or fh");
    if (c.surgery.cutoff2 != "near_linear" && c.surgery.cutoff2 != "weighted")
        r.error("surgery", "cutoff2", r.line_of("surgery", "cutoff2"), "expected near_linear or weighted");
    if (!(c.surgery.eps > 0.0)) r.error("surgery", "eps", r.line_of("surgery", "eps"), "must be positive");
    if (c.surgery.delta && !(*c.surgery.delta > 0.0))
        r.error("surgery", "delta", r.line_of("surgery", "delta"), "must be positive");
    if (!(c.surgery.fraction > 0.0)) r.error("surgery", "fraction", r.line_of("surgery", "fraction"), "must be positive");
    if (!(c.surgery.cap_fraction > 0.0 && c.surgery.cap_fraction < 0.5))
        r.error("surgery", "cap_fraction", r.line_of("surgery", "cap_fraction"), "must lie in (0, 0.5)");
    if (!(c.surgery.lambda_width > 0.0))
        r.error("surgery", "lambda_width", r.line_of("surgery", "lambda_width"), "must be positive");
    if (c.surgery.present && c.surgery.kind == "lt" && c.surgery.eps > c.model.eps)
        r.error("surgery", "eps", r.line_of("surgery", "eps"), "exceeds the model box half-width eps");
    if (c.surgery.present && c.surgery.kind == "lt" && c.surgery.delta && *c.surgery.delta > c.model.delta)
        r.error("surgery", "delta", r.line_of("surgery", "delta"), "exceeds the model box half-width delta");

    // [grid]
    r.integer("grid", "n", c.grid.n);
    r.real("grid", "zero_tol", c.grid.zero_tol);
    r.real("grid", "margin_floor", c.grid.margin_floor);
    r.real("grid", "seam_tol", c.grid.seam_tol);
    r.integer("grid", "random_points", c.grid.random_points);
    r.integer("grid", "fan", c.grid.fan);
    r.integer("grid", "steps", c.grid.steps);
    r.integer("grid", "slope_steps", c.grid.slope_steps);
    if (c.grid.n < 2) r.error("grid", "n", r.line_of("grid", "n"), "must be at least 2");
    if (!(c.grid.zero_tol > 0.0)) r.error("grid", "zero_tol", r.line_of("grid", "zero_tol"), "must be positive");
    if (!(c.grid.seam_tol > 0.0)) r.error("grid", "seam_tol", r.line_of("grid", "seam_tol"), "must be positive");
    if (c.grid.random_points < 1)
        r.error("grid", "random_points", r.line_of("grid", "random_points"), "must be at least 1");
    if (c.grid.fan < 2) r.error("grid", "fan", r.line_of("grid", "fan"), "must be at least 2");
    if (c.grid.steps < 16) r.error("grid", "steps", r.line_of("grid", "steps"), "must be at least 16");
    if (c.grid.slope_steps < 4) r.error("grid", "slope_steps", r.line_of("grid", "slope_steps"), "must be at least 4");

    // [output]
    r.text("output", "dir", c.output.dir);
    r.text("output", "report", c.output.report);
    r.text("output", "curves", c.output.curves);
    if (c.output.report.empty()) r.error("output", "report", r.line_of("output", "report"), "must not be empty");
    if (c.output.curves.empty()) r.error("output", "curves", r.line_of("output", "curves"), "must not be empty");

    r.check_unknown();
    if (!issues.empty()) {
        std::stable_sort(issues.begin(), issues.end(),
                         [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
        throw ConfigError(std::move(issues));
    }

    if (c.surgery.present && c.surgery.kind == "lt" && c.surgery.delta) {
        const double lam = CutoffProfile::near_linear(c.surgery.eps, c.surgery.cap_fraction).max_slope();
        const double bound = admissible_delta(c.surgery.q, c.surgery.eps, lam);
        if (*c.surgery.delta >= bound) {
            std::ostringstream os;
            os << "line " << r.line_of("surgery", "delta") << ": [surgery] delta = " << *c.surgery.delta
               << " exceeds the a priori bound " << bound << "; the grid check decides";
            c.warnings.push_back(os.str());
        }
    }
    return c;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({{"", "", 0, "cannot open " + path}});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace bicontact::cli
