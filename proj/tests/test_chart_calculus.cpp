#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "bicontact/chart_map.hpp"
#include "bicontact/expression.hpp"
#include "bicontact/forms.hpp"
#include "bicontact/profile.hpp"

using namespace bicontact;
using Catch::Approx;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
ChartPtr box() { return make_flow_box_chart({-1.0, 1.0}, {-1.0, 1.0}); }
}  // namespace

TEST_CASE("parser: coordinate projection") {
    auto chart = box();
    auto f = parse_scalar_field("v", chart);
    REQUIRE(f.value({0.0, 0.3, 0.0}) == 0.3);
    const auto g = f.gradient({0.0, 0.3, 0.0});
    REQUIRE(g == Vec3<double>{0.0, 1.0, 0.0});
}

TEST_CASE("parser: gradient matches the symbolic derivative") {
    auto f = parse_scalar_field("exp(0.5*v^2)*cos(w)", box());
    REQUIRE(f.value({0.0, 0.0, 0.0}) == 1.0);
    REQUIRE(f.gradient({0.0, 0.0, 0.0}) == Vec3<double>{0.0, 0.0, 0.0});

    const Point<double> p{0.1, 0.3, 0.2};
    REQUIRE_THAT(f.value(p), WithinRel(1.0251769449873340, 1e-14));
    const auto g = f.gradient(p);
    REQUIRE(g[0] == 0.0);
    REQUIRE_THAT(g[1], WithinRel(0.30755308349620020, 1e-14));
    REQUIRE_THAT(g[2], WithinRel(-0.20781365492105483, 1e-14));
}

TEST_CASE("parser: precedence and associativity") {
    auto chart = box();
    const Point<double> p{0.5, 2.0, 3.0};
    REQUIRE(parse_scalar_field("1 + 2*3", chart).value(p) == 7.0);
    REQUIRE(parse_scalar_field("2^3^2", chart).value(p) == 512.0);
    REQUIRE(parse_scalar_field("-v^2", chart).value(p) == -4.0);
    REQUIRE(parse_scalar_field("w - v - 1", chart).value(p) == 0.0);
    REQUIRE(parse_scalar_field("w / v / 3", chart).value(p) == 0.5);
    REQUIRE_THAT(parse_scalar_field("sin(pi/2) + 1e-3", chart).value(p), WithinAbs(1.001, 1e-15));
    REQUIRE_THAT(parse_scalar_field("v^0.5", chart).value(p), WithinRel(std::sqrt(2.0), 1e-15));
    REQUIRE(parse_scalar_field("  s*( v + w )", chart).value(p) == 2.5);
}

TEST_CASE("parser: syntax errors carry offsets") {
    auto chart = box();
    try {
        (void)parse_scalar_field("tan(w", chart);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.offset() == 5);
    }
    try {
        (void)parse_scalar_field("v + q", chart);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        REQUIRE(e.offset() == 4);
        REQUIRE(std::string(e.what()).find("unknown identifier") != std::string::npos);
    }
    REQUIRE_THROWS_AS(parse_scalar_field("", chart), ParseError);
    REQUIRE_THROWS_AS(parse_scalar_field("v )", chart), ParseError);
    REQUIRE_THROWS_AS(parse_scalar_field("sin v", chart), ParseError);
    REQUIRE_THROWS_AS(parse_scalar_field("2 ** v", chart), ParseError);
}

TEST_CASE("parser: tan pole is a domain error") {
    auto f = parse_scalar_field("tan(w)", box());
    REQUIRE_THROWS_AS(f.value({0.0, 0.0, std::numbers::pi / 2}), DomainError);
    REQUIRE_THROWS_AS(f.gradient({0.0, 0.0, std::numbers::pi / 2}), DomainError);
    REQUIRE_NOTHROW(f.value({0.0, 0.0, 1.0}));
}

TEST_CASE("parser: gradients agree with central differences at random points") {
    auto chart = box();
    const char* exprs[] = {"exp(0.5*v^2)*cos(w)", "sin(s*v) + w^3/(2 + cos(v))", "tan(0.5*w)*exp(-v^2) - s*w",
                           "(1 + 0.1*sin(s))*tan(w)"};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double h = 1e-4;
    for (const char* text : exprs) {
        auto f = parse_scalar_field(text, chart);
        for (int n = 0; n < 1000; ++n) {
            const Point<double> p{U(rng), U(rng), U(rng)};
            const auto g = f.gradient(p);
            for (int i = 0; i < 3; ++i) {
                Point<double> a = p, b = p;
                a[i] += h;
                b[i] -= h;
                const double fd = (f.value(a) - f.value(b)) / (2 * h);
                REQUIRE(std::abs(fd - g[i]) <= 1e-6 * std::max(1.0, std::abs(g[i])));
            }
        }
    }
}

TEST_CASE("derived fields run out of nesting levels") {
    auto f = parse_scalar_field("v^4", box());
    auto d3 = partial(partial(partial(f, 1), 1), 1);
    REQUIRE_THAT(d3.value({0.0, 0.5, 0.0}), WithinRel(12.0, 1e-14));
    auto d4 = partial(d3, 1);
    REQUIRE_THROWS_AS(d4.value({0.0, 0.5, 0.0}), DepthError);
}

TEST_CASE("exterior derivative") {
    auto chart = box();
    const auto zero = ScalarField::constant(0.0);
    const auto one = ScalarField::constant(1.0);
    const Point<double> p{0.2, 0.4, -0.3};

    SECTION("d(dw + v ds) = dv ^ ds") {
        auto a = make_one_form(chart, ScalarField::coordinate(1), zero, one);
        auto da = exterior_derivative(a);
        REQUIRE(da.coefficient(p, 0, 1) == -1.0);
        REQUIRE(da.coefficient(p, 1, 0) == 1.0);
        REQUIRE(da.coefficient(p, 1, 2) == 0.0);
    }
    SECTION("d(ds) = 0") {
        auto a = make_one_form(chart, one, zero, zero);
        REQUIRE(exterior_derivative(a).at(p) == Vec3<double>{0.0, 0.0, 0.0});
    }
    SECTION("d(w ds) on (d/dw, d/ds) is 1") {
        auto a = make_one_form(chart, ScalarField::coordinate(2), zero, zero);
        auto da = exterior_derivative(a);
        REQUIRE(da.apply(p, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}) == 1.0);
        REQUIRE(da.apply(p, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}) == -1.0);
    }
    SECTION("d(d phi) = 0 and d of a two-form") {
        const char* exprs[] = {"sin(s*v)*exp(w)", "v^3*w - tan(0.3*s)", "cos(s + v*w)"};
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (const char* text : exprs) {
            auto phi = parse_scalar_field(text, chart);
            auto ddphi = exterior_derivative(exterior_derivative(phi, chart));
            auto dda = exterior_derivative(exterior_derivative(make_one_form(chart, phi, phi * phi, sin(phi))));
            for (int n = 0; n < 200; ++n) {
                const Point<double> q{U(rng), U(rng), U(rng)};
                REQUIRE(norm(ddphi.at(q)) <= 1e-10);
                REQUIRE(std::abs(dda.at(q)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("two-forms are antisymmetric") {
    auto chart = box();
    auto a = make_one_form(chart, parse_scalar_field("v*w", chart), parse_scalar_field("sin(s)", chart),
                           parse_scalar_field("exp(v)", chart));
    auto da = exterior_derivative(a);
    const Point<double> p{0.3, -0.2, 0.7};
    const Vec3<double> y{0.3, 1.0, -2.0}, z{1.5, 0.0, 0.25};
    REQUIRE(da.apply(p, y, z) == -da.apply(p, z, y));
    REQUIRE(da.apply(p, y, y) == 0.0);
}

TEST_CASE("wedge_contact against the chart volume") {
    const auto zero = ScalarField::constant(0.0);
    const auto one = ScalarField::constant(1.0);
    SECTION("negative form on the flow box") {
        auto chart = box();
        auto a = make_one_form(chart, ScalarField::coordinate(1), zero, one);
        REQUIRE(wedge_contact(a).at({0.1, 0.2, 0.3}) == -1.0);
    }
    SECTION("dt + w ds on the FH chart") {
        auto chart = make_fh_chart({-1.0, 1.0}, {-1.0, 1.0});
        REQUIRE(chart->volume_sign() == -1);
        auto g = make_one_form(chart, one, ScalarField::coordinate(2), zero);
        REQUIRE(wedge_contact(g).at({0.1, 0.2, 0.3}) == 1.0);
    }
    SECTION("ds - tan(w) dv") {
        auto chart = box();
        auto a = make_one_form(chart, one, -parse_scalar_field("tan(w)", chart), zero);
        REQUIRE(wedge_contact(a).at({0.0, 0.0, 0.0}) == 1.0);
        REQUIRE_THAT(wedge_contact(a).at({0.0, 0.0, 0.3}), WithinRel(1.0956889153225471, 1e-14));
    }
    SECTION("alpha ^ d alpha agrees with wedge(alpha, d alpha)") {
        auto chart = make_fh_chart({-1.0, 1.0}, {-1.0, 1.0});
        auto a = make_one_form(chart, parse_scalar_field("1 + 0.2*s*w", chart), parse_scalar_field("w", chart),
                               parse_scalar_field("sin(t)", chart));
        const Point<double> p{0.2, 1.1, -0.4};
        REQUIRE_THAT(wedge_contact(a).at(p), WithinAbs(wedge(a, exterior_derivative(a)).at(p), 1e-15));
    }
}

TEST_CASE("lie bracket") {
    auto chart = box();
    const Point<double> p{0.4, -0.1, 0.6};
    auto ds = coordinate_field(chart, 0);
    auto dv = coordinate_field(chart, 1);
    auto dw = coordinate_field(chart, 2);
    REQUIRE(lie_bracket(ds, dv).at(p) == Vec3<double>{0.0, 0.0, 0.0});
    auto wds = ScalarField::coordinate(2) * ds;
    REQUIRE(lie_bracket(dw, wds).at(p) == Vec3<double>{1.0, 0.0, 0.0});

    SECTION("antisymmetry, bilinearity, Jacobi") {
        auto Y = make_vector_field(chart, [](const auto& q) {
            using T = std::decay_t<decltype(q[0])>;
            return Vec3<T>{bicontact::sin(q[1]), q[0] * q[2], bicontact::exp(q[1] * 0.5)};
        });
        auto Z = make_vector_field(chart, [](const auto& q) {
            using T = std::decay_t<decltype(q[0])>;
            return Vec3<T>{q[2] * q[2], bicontact::cos(q[0]), q[1] - q[0]};
        });
        auto W = make_vector_field(chart, [](const auto& q) {
            using T = std::decay_t<decltype(q[0])>;
            return Vec3<T>{T(1.0), q[0] * q[1], bicontact::sin(q[2])};
        });
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        auto jac = lie_bracket(Y, lie_bracket(Z, W)) + lie_bracket(Z, lie_bracket(W, Y)) +
                   lie_bracket(W, lie_bracket(Y, Z));
        auto lin = lie_bracket(2.0 * Y + Z, W) - (2.0 * lie_bracket(Y, W) + lie_bracket(Z, W));
        for (int n = 0; n < 100; ++n) {
            const Point<double> q{U(rng), U(rng), U(rng)};
            const auto a = lie_bracket(Y, Z).at(q);
            const auto b = lie_bracket(Z, Y).at(q);
            for (int i = 0; i < 3; ++i) REQUIRE_THAT(a[i], WithinAbs(-b[i], 1e-15));
            REQUIRE(norm(jac.at(q)) <= 1e-12);
            REQUIRE(norm(lin.at(q)) <= 1e-12);
        }
    }
}

TEST_CASE("divergence") {
    auto chart = box();
    auto Y = make_vector_field(chart, [](const auto& q) {
        using T = std::decay_t<decltype(q[0])>;
        return Vec3<T>{q[0] * q[0], q[1] * q[2], T(0.0)};
    });
    REQUIRE(divergence(Y).value({0.5, 0.0, 0.25}) == 1.25);
    auto rho = parse_scalar_field("exp(v)", chart);
    REQUIRE(divergence(Y, rho).value({0.5, 0.5, 0.25}) == 1.375);
}

TEST_CASE("pullback of one-forms") {
    auto chart = box();
    auto shear = ShearProfile::legendrian(1, 0.3);
    auto F = shear_map(chart, shear);
    const auto zero = ScalarField::constant(0.0);
    const auto one = ScalarField::constant(1.0);

    SECTION("F^* ds = ds + f'(v) dv") {
        auto ds = make_one_form(chart, one, zero, zero);
        auto pulled = pullback_oneform(F, ds);
        for (double vv : {-0.4, -0.2, 0.0, 0.1, 0.29}) {
            const auto c = pulled.at({1.0, vv, 0.0});
            REQUIRE(c[0] == 1.0);
            REQUIRE_THAT(c[1], WithinAbs(shear.f_prime()(vv), 1e-15));
            REQUIRE(c[2] == 0.0);
        }
    }
    SECTION("F^*(dw + v ds) picks up v f'(v) dv") {
        auto a = make_one_form(chart, ScalarField::coordinate(1), zero, one);
        auto pulled = pullback_oneform(F, a);
        const double vv = 0.1;
        const auto c = pulled.at({2.0, vv, 0.5});
        REQUIRE(c[0] == vv);
        REQUIRE_THAT(c[1], WithinAbs(vv * shear.f_prime()(vv), 1e-15));
        REQUIRE(c[2] == 1.0);
    }
    SECTION("identity and functoriality") {
        auto a = make_one_form(chart, parse_scalar_field("sin(s)*v", chart), parse_scalar_field("w^2", chart),
                               parse_scalar_field("exp(s*v)", chart));
        auto id = identity_map(chart);
        const Point<double> p{0.7, 0.2, -0.5};
        REQUIRE(pullback_oneform(id, a).at(p) == a.at(p));

        ChartMap psi(chart, chart, TripleField([](const auto& q) {
                         using T = std::decay_t<decltype(q[0])>;
                         return Point<T>{q[0] + 0.3 * q[2] * q[2], bicontact::sin(q[1]), q[2] + 0.1 * q[0]};
                     }));
        auto lhs = pullback_oneform(compose(F, psi), a);
        auto rhs = pullback_oneform(psi, pullback_oneform(F, a));
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> U(-0.5, 0.5);
        for (int n = 0; n < 100; ++n) {
            const Point<double> q{U(rng), U(rng), U(rng)};
            const auto x = lhs.at(q), y = rhs.at(q);
            for (int i = 0; i < 3; ++i) REQUIRE_THAT(x[i], WithinAbs(y[i], 1e-10));
        }
    }
    SECTION("pullback of an exact form is exact") {
        auto phi = parse_scalar_field("sin(s)*w + v^2", chart);
        auto pulled = pullback_oneform(F, exterior_derivative(phi, chart));
        auto d = exterior_derivative(pulled);
        REQUIRE(norm(d.at({0.3, 0.05, 0.2})) <= 1e-10);
    }
    SECTION("jacobian agrees with finite differences") {
        const Point<double> p{0.1, 0.05, 0.2};
        const auto J = F.jacobian(p);
        const double h = 1e-6;
        for (int j = 0; j < 3; ++j) {
            Point<double> a = p, b = p;
            a[j] += h;
            b[j] -= h;
            const auto fa = F(a), fb = F(b);
            for (int i = 0; i < 3; ++i) REQUIRE_THAT(J[i][j], WithinAbs((fa[i] - fb[i]) / (2 * h), 1e-6));
        }
    }
}

TEST_CASE("shear profile") {
    for (int q : {-2, -1, 1, 3}) {
        const double delta = 0.3;
        auto sh = ShearProfile::legendrian(q, delta);
        REQUIRE(sh.f()(-delta) == 0.0);
        REQUIRE(sh.f()(-1.0) == 0.0);
        REQUIRE_THAT(sh.f()(delta), WithinAbs(-2 * std::numbers::pi * q, 1e-12));
        REQUIRE(sh.f()(5.0) == -2 * std::numbers::pi * q);
        REQUIRE(sh.f_prime()(delta + 1e-9) == 0.0);
        REQUIRE(sh.f_prime()(-delta - 1e-9) == 0.0);
        REQUIRE_THAT(std::abs(sh.f_prime()(0.0)), WithinRel(sh.max_slope(), 1e-13));
        REQUIRE_THAT(sh.max_slope(), WithinRel(15.0 / 8.0 * std::numbers::pi * std::abs(q) / delta, 1e-14));
        for (int i = 0; i <= 100; ++i) {
            const double x = -delta + 2 * delta * i / 100.0;
            REQUIRE(sh.f_prime()(x) * q <= 0.0);
            REQUIRE(std::abs(sh.f_prime()(x)) <= sh.max_slope() * (1 + 1e-12));
        }
        // continuity of f, f', f'' across both breakpoints
        for (double x : {-delta, delta})
            for (int k = 0; k <= 2; ++k)
                REQUIRE_THAT(sh.f().derivative(x - 1e-12, k), WithinAbs(sh.f().derivative(x + 1e-12, k), 1e-6));
        REQUIRE_THAT(sh.moment()(delta), WithinAbs(0.0, 1e-12));
    }
    auto sh = ShearProfile::legendrian(2, 0.5);
    REQUIRE_THAT(sh.moment()(0.3), WithinRel(0.25735927018207586, 1e-12));
    REQUIRE_THROWS_AS(ShearProfile::legendrian(1, 0.0), InvariantError);
}

TEST_CASE("near-linear cutoff") {
    const double eps = 0.5;
    auto lam = CutoffProfile::near_linear(eps);
    REQUIRE(lam.value(0.0) == 1.0);
    REQUIRE(lam.value(-3.0) == 1.0);
    REQUIRE_THAT(lam.value(eps), WithinAbs(0.0, 1e-15));
    REQUIRE(lam.value(2.0) == 0.0);
    REQUIRE(lam.slope(0.0) == 0.0);
    REQUIRE_THAT(lam.max_slope(), WithinRel(1.0 / (eps * 0.9), 1e-14));
    for (int i = 0; i <= 1000; ++i) {
        const double x = eps * i / 1000.0;
        REQUIRE(lam.slope(x) <= 0.0);
        REQUIRE(-lam.slope(x) <= lam.max_slope() * (1 + 1e-12));
    }
    for (double x : {0.05, 0.45})
        REQUIRE_THAT(lam.slope(x - 1e-12), WithinAbs(lam.slope(x + 1e-12), 1e-9));
    REQUIRE_THROWS_AS(CutoffProfile::near_linear(0.5, 0.6), InvariantError);
    REQUIRE_THROWS_AS(CutoffProfile::near_linear(-1.0), InvariantError);
}

TEST_CASE("weighted cutoff follows the rotation of tan w") {
    auto chart = box();
    const double eps = 1.2;
    auto lam = CutoffProfile::weighted(eps, parse_scalar_field("tan(w)", chart));
    REQUIRE_THAT(lam.weight(), WithinRel(1.0 / std::tan(eps), 1e-14));
    REQUIRE(lam.value(0.0) == 1.0);
    REQUIRE_THAT(lam.value(eps - 1e-13), WithinAbs(0.0, 1e-10));
    const double x = 0.7;
    REQUIRE_THAT(lam.slope(x), WithinRel(-lam.weight() / (std::cos(x) * std::cos(x)), 1e-13));
    REQUIRE_THROWS_AS(CutoffProfile::weighted(eps, parse_scalar_field("-w", chart)), InvariantError);
}
