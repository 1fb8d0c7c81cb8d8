#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "bicontact/contact.hpp"
#include "bicontact/expression.hpp"
#include "bicontact/flow.hpp"
#include "bicontact/models.hpp"

using namespace bicontact;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const ScalarField zero = ScalarField::constant(0.0);
const ScalarField one = ScalarField::constant(1.0);

OneForm alpha_minus(const ChartPtr& c) { return make_one_form(c, ScalarField::coordinate(1), zero, one); }
OneForm alpha_plus_tan(const ChartPtr& c) { return make_one_form(c, one, -parse_scalar_field("tan(w)", c), zero); }
}  // namespace

TEST_CASE("contact coefficient") {
    auto chart = make_flow_box_chart({-0.5, 0.5}, {-0.5, 0.5});
    REQUIRE(contact_coefficient(alpha_minus(chart)).value({0.3, 0.2, 0.1}) == -1.0);
    const double w = 0.3;
    REQUIRE_THAT(contact_coefficient(alpha_plus_tan(chart)).value({0.0, 0.1, w}),
                 WithinRel(1.0956889153225471, 1e-14));
    auto phi = parse_scalar_field("sin(s)*v + w^2", chart);
    REQUIRE_THAT(contact_coefficient(exterior_derivative(phi, chart)).value({0.2, 0.3, 0.4}), WithinAbs(0.0, 1e-15));
}

TEST_CASE("verify_contact") {
    auto chart = make_flow_box_chart({-0.5, 0.5}, {-0.5, 0.5});
    const auto grid = GridSpec::cube(32);
    auto neg = verify_contact(alpha_minus(chart), -1, grid);
    REQUIRE(neg.pass);
    REQUIRE(neg.value == 1.0);
    REQUIRE(neg.samples == 32u * 32u * 32u);
    REQUIRE(neg.note.find("-1") != std::string::npos);

    auto closed = verify_contact(make_one_form(chart, one, zero, zero), +1, grid);
    REQUIRE_FALSE(closed.pass);
    REQUIRE(closed.value == 0.0);
    REQUIRE(closed.violation_count == grid.size());

    auto fh = make_fh_chart({-0.5, 0.5}, {-0.5, 0.5});
    auto gamma = make_one_form(fh, one, ScalarField::coordinate(2), zero);
    auto pos = verify_contact(gamma, +1, grid);
    REQUIRE(pos.pass);
    REQUIRE(pos.value == 1.0);

    REQUIRE_THROWS_AS(verify_contact(gamma, 0, grid), InvariantError);
}

TEST_CASE("verify_contact refuses non-finite samples") {
    auto chart = make_flow_box_chart({-0.5, 0.5}, {0.0, std::numbers::pi / 2});
    REQUIRE_THROWS_AS(verify_contact(alpha_plus_tan(chart), +1, GridSpec::cube(8)), DomainError);
}

TEST_CASE("reeb fields of the standard forms") {
    auto chart = make_flow_box_chart({-1.0, 1.0}, {-1.0, 1.0});
    const Point<double> p{0.3, -0.4, 0.2};
    auto r = reeb_field(alpha_minus(chart)).at(p);
    REQUIRE(r == Vec3<double>{0.0, 0.0, 1.0});

    auto fh = make_fh_chart({-1.0, 1.0}, {-1.0, 1.0});
    auto gamma = make_one_form(fh, one, ScalarField::coordinate(2), zero);
    REQUIRE(reeb_field(gamma).at(p) == Vec3<double>{1.0, 0.0, 0.0});

    LambdaModel lam;
    const auto h = lam.frame().H.at(p);
    const auto rh = reeb_field(lam.alpha_plus()).at(p);
    for (int i = 0; i < 3; ++i) REQUIRE_THAT(rh[i], WithinAbs(h[i], 1e-14));

    REQUIRE_THROWS_AS(reeb_field(make_one_form(chart, one, zero, zero)).at(p), DegeneratePointError);
    try {
        (void)reeb_field(make_one_form(chart, one, zero, zero)).at(p);
    } catch (const DegeneratePointError& e) {
        REQUIRE(e.where() == p);
    }
}

TEST_CASE("reeb fields satisfy their defining equations at random points") {
    LambdaModel lam;
    auto chart = lam.chart();
    auto fh = make_fh_chart({-1.0, 1.0}, {-1.0, 1.0});
    const std::vector<OneForm> forms{lam.alpha_minus(), lam.alpha_plus(), lam.beta_plus(),
                                     make_one_form(chart, one, -parse_scalar_field("tan(0.5*w)", chart), zero),
                                     make_one_form(fh, one, ScalarField::coordinate(2), zero)};
    for (const auto& a : forms) {
        auto r = reeb_field(a);
        auto da = exterior_derivative(a);
        SampleBox box = SampleBox::of(*a.chart());
        box.ranges[2] = {-1.0, 1.0};
        for (const auto& p : random_points(box, 1000, 17)) {
            const auto rv = r.at(p);
            REQUIRE_THAT(a.apply(p, rv), WithinAbs(1.0, 1e-10));
            for (int i = 0; i < 3; ++i) {
                Vec3<double> e{0.0, 0.0, 0.0};
                e[i] = 1.0;
                REQUIRE(std::abs(da.apply(p, rv, e)) <= 1e-8);
            }
        }
    }
}

TEST_CASE("transversality margin") {
    auto chart = make_flow_box_chart({-0.5, 0.5}, {-0.5, 0.5});
    const auto grid = GridSpec::cube(32);
    const double m = transversality_margin(alpha_minus(chart), alpha_plus_tan(chart), grid);
    REQUIRE(m > 0.5);
    REQUIRE_THAT(m, WithinAbs(0.89445627317647802, 1e-12));
    auto dw = make_one_form(chart, zero, zero, one);
    REQUIRE(transversality_margin(dw, dw, grid) == 0.0);
    REQUIRE_THROWS_AS(transversality_margin(make_one_form(chart, zero, zero, zero), dw, grid), DegeneratePointError);
}

TEST_CASE("quadrant classification") {
    auto chart = make_flow_box_chart({-0.5, 0.5}, {-0.5, 0.5});
    BiContact bi(alpha_minus(chart), alpha_plus_tan(chart));
    const Point<double> p{0.0, 0.0, 0.0};  // alpha_- = dw, alpha_+ = ds here
    REQUIRE(classify_vector(Vec3<double>{0.0, 0.0, 1.0}, bi, p) == Quadrant::on_xi_plus);
    REQUIRE(classify_vector(Vec3<double>{1.0, 0.0, 1.0}, bi, p) == Quadrant::I);
    REQUIRE(classify_vector(Vec3<double>{-1.0, 0.0, -1.0}, bi, p) == Quadrant::III);
    REQUIRE(classify_vector(Vec3<double>{1.0, 0.0, -1.0}, bi, p) == Quadrant::II);
    REQUIRE(classify_vector(Vec3<double>{-1.0, 0.0, 1.0}, bi, p) == Quadrant::IV);
    REQUIRE(classify_vector(Vec3<double>{1.0, 0.0, 0.0}, bi, p) == Quadrant::on_xi_minus);
    REQUIRE(classify_vector(Vec3<double>{0.0, 1.0, 0.0}, bi, p) == Quadrant::along_X);
    REQUIRE(classify_vector(Vec3<double>{1.0, 0.0, 1.0}, bi, p, {quadrant_tolerance, true}) == Quadrant::IV);
    REQUIRE_THROWS_AS(classify_vector(Vec3<double>{0.0, 0.0, 0.0}, bi, p), DegeneratePointError);

    LambdaModel lam;
    REQUIRE(classify_vector(lam.frame().H, lam.bicontact(), {0.4, 0.3, 0.7}) == Quadrant::on_xi_minus);
    REQUIRE(classify_vector(lam.frame().V, lam.bicontact(), {0.4, 0.3, 0.7}) == Quadrant::on_xi_plus);
}

TEST_CASE("quadrants: negation and positive rescaling") {
    auto chart = make_flow_box_chart({-0.5, 0.5}, {-0.5, 0.5});
    BiContact bi(alpha_minus(chart), alpha_plus_tan(chart));
    auto rho = parse_scalar_field("2 + sin(s*v) + w^2", chart);
    BiContact scaled(rho * bi.alpha_minus(), exp(ScalarField::coordinate(1)) * bi.alpha_plus());
    const auto pts = random_points(SampleBox::of(*chart), 500, 9);
    const auto vecs = random_points(SampleBox{{Interval{-1, 1}, Interval{-1, 1}, Interval{-1, 1}}}, 500, 10);
    auto negated = [](Quadrant q) {
        switch (q) {
            case Quadrant::I: return Quadrant::III;
            case Quadrant::III: return Quadrant::I;
            case Quadrant::II: return Quadrant::IV;
            case Quadrant::IV: return Quadrant::II;
            default: return q;
        }
    };
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto y = vecs[k];
        const auto q = classify_vector(y, bi, pts[k]);
        REQUIRE(classify_vector(Vec3<double>{-y[0], -y[1], -y[2]}, bi, pts[k]) == negated(q));
        REQUIRE(classify_vector(y, scaled, pts[k]) == q);
    }
}

TEST_CASE("hozoori certificate") {
    const auto grid = GridSpec::cube(16);
    SECTION("Lambda pair: R(alpha_-) = V lies in xi_+") {
        LambdaModel lam({-1.0, 1.0}, {-1.4, 1.4});
        auto res = hozoori_certificate(lam.bicontact(), lam.frame().X, grid);
        REQUIRE(res.pass());
        REQUIRE(res.count(Quadrant::on_xi_plus) == grid.size());
    }
    SECTION("flow-box pair with b = tan w") {
        auto model = flow_box_bicontact(0.3, 0.5);
        auto res = hozoori_certificate(model.bicontact(), grid);
        REQUIRE(res.pass());
    }
    SECTION("exemption restricted to a region") {
        auto model = flow_box_bicontact(0.3, 0.5);
        auto res = hozoori_certificate(model.bicontact(), grid, std::nullopt,
                                       box_region(SampleBox::of(*model.chart).with(2, {0.0, 0.5})));
        REQUIRE_FALSE(res.pass());
        REQUIRE(res.first_rejected_class == Quadrant::on_xi_plus);
        REQUIRE(res.first_rejected[2] < 0.0);
    }
    SECTION("a pair whose R(alpha_-) leaves quadrants I and III") {
        // alpha_+ tilted by dw: alpha_+(R) = -1 while alpha_-(R) = 1
        auto chart = make_flow_box_chart({-0.3, 0.3}, {-0.5, 0.5});
        auto tilted = make_one_form(chart, one, -parse_scalar_field("tan(w)", chart), ScalarField::constant(-1.0));
        BiContact bi(alpha_minus(chart), tilted);
        REQUIRE(bi.validate(grid)[1].pass);
        auto res = hozoori_certificate(bi, grid);
        REQUIRE_FALSE(res.pass());
        REQUIRE(res.first_rejected_class == Quadrant::IV);
        REQUIRE(res.count(Quadrant::IV) == grid.size());
        REQUIRE(res.report.value < 0.0);
    }
    SECTION("monotone under coarsening") {
        auto model = flow_box_bicontact(0.3, 0.5);
        for (int n : {3, 5, 9, 17, 33}) REQUIRE(hozoori_certificate(model.bicontact(), GridSpec::cube(n)).pass());
    }
}

TEST_CASE("s-average isotopy") {
    auto chart = make_flow_box_chart({-0.3, 0.3}, {-0.5, 0.5});
    const auto grid = GridSpec::cube(12);
    SECTION("s-independent b") {
        auto res = s_average_isotopy(chart, parse_scalar_field("tan(w)", chart), 4, grid);
        REQUIRE_FALSE(res.truncated);
        REQUIRE(res.forms.size() == 5u);
        const Point<double> p{1.0, 0.1, 0.3};
        for (const auto& f : res.forms) REQUIRE_THAT(f.at(p)[1], WithinAbs(-std::tan(0.3), 1e-15));
    }
    SECTION("modulated tan w") {
        auto b = parse_scalar_field("(1 + 0.1*sin(s))*tan(w)", chart);
        auto res = s_average_isotopy(chart, b, 8, grid);
        REQUIRE_FALSE(res.truncated);
        REQUIRE(res.forms.size() == 9u);
        for (const auto& r : res.reports) REQUIRE(r.pass);
        const Point<double> p{1.0, 0.1, 0.3};
        REQUIRE_THAT(res.forms.back().at(p)[1], WithinAbs(-std::tan(0.3), 1e-14));
    }
    SECTION("an interpolant loses the contact condition") {
        auto b = parse_scalar_field("tan(w) - 2*cos(s)*w", chart);
        auto res = s_average_isotopy(chart, b, 8, grid);
        REQUIRE(res.truncated);
        REQUIRE(res.failed_step == 0);
        REQUIRE(res.forms.empty());
    }
}

TEST_CASE("flow integration") {
    auto chart = make_flow_box_chart({-1.0, 1.0}, {-1.0, 1.0});
    auto path = integrate_flow(coordinate_field(chart, 2), {0.0, 0.0, 0.0}, 0.5);
    REQUIRE_THAT(path.end[2], WithinAbs(0.5, 1e-14));
    REQUIRE(path.end[0] == 0.0);
    REQUIRE(path.samples.size() == 4097u);

    auto loop = integrate_flow(coordinate_field(chart, 0), {0.0, 0.0, 0.0}, 4 * std::numbers::pi);
    REQUIRE(loop.winding[0] == 2);
    REQUIRE_THAT(loop.end[0], WithinAbs(0.0, 1e-9));

    SECTION("chart exit is reported with face and time") {
        try {
            (void)integrate_flow(coordinate_field(chart, 2), {0.0, 0.0, 0.0}, 2.0);
            FAIL("expected an exit");
        } catch (const ChartExitError& e) {
            REQUIRE(e.face() == "w=1");
            REQUIRE_THAT(e.time(), WithinAbs(1.0, 1e-3));
        }
    }
    SECTION("non-finite field") {
        auto bad = make_vector_field(chart, [](const auto& p) {
            using T = std::decay_t<decltype(p[0])>;
            return Vec3<T>{T(0.0), T(0.0), T(1.0) / p[2]};
        });
        REQUIRE_THROWS_AS(integrate_flow(bad, {0.0, 0.0, 0.0}, 0.1), DomainError);
    }
    SECTION("the closed orbit of X in the Lambda chart") {
        LambdaModel lam;
        const Point<double> start{0.0, 0.0, std::numbers::pi / 2};
        auto orbit = integrate_flow(lam.frame().X, start, two_pi);
        REQUIRE(orbit.winding[0] == -1);
        for (int i = 0; i < 3; ++i) REQUIRE_THAT(orbit.end[i], WithinAbs(start[i], 1e-9));
    }
    SECTION("fourth order convergence") {
        LambdaModel lam;
        const Point<double> start{0.0, 0.05, std::numbers::pi / 2 - 0.1};
        auto ref = integrate_flow(lam.frame().X, start, 2.0, {2.0 / 2048, 4096, 1, false}).unwrapped;
        auto err = [&](double h) {
            auto e = integrate_flow(lam.frame().X, start, 2.0, {h, 4096, 1, false}).unwrapped;
            return std::max({std::abs(e[0] - ref[0]), std::abs(e[1] - ref[1]), std::abs(e[2] - ref[2])});
        };
        const double ratio = err(0.1) / err(0.05);
        REQUIRE(ratio > 14.0);
        REQUIRE(ratio < 18.0);
    }
}

TEST_CASE("variational monodromy") {
    auto chart = make_flow_box_chart({-1.0, 1.0}, {-1.0, 1.0});
    auto m = variational_monodromy(coordinate_field(chart, 0), {0.0, 0.2, 0.1}, two_pi);
    REQUIRE(m.matrix.isApprox(Eigen::Matrix3d::Identity(), 1e-14));

    LambdaModel lam;
    auto mono = variational_monodromy(lam.frame().X, {0.0, 0.0, std::numbers::pi / 2}, two_pi);
    REQUIRE_THAT(std::abs(mono.eigenvalues[0]), WithinRel(std::exp(two_pi), 1e-2));
    REQUIRE_THAT(std::abs(mono.eigenvalues[1]), WithinRel(1.0, 1e-2));
    REQUIRE_THAT(std::abs(mono.eigenvalues[2]), WithinRel(std::exp(-two_pi), 1e-2));
    REQUIRE_THAT(mono.determinant, WithinAbs(1.0, 1e-6));

    REQUIRE_THROWS_AS(variational_monodromy(lam.frame().X, {0.0, 0.0, 0.3}, two_pi), InvariantError);
}
