#pragma once

/**
 * @file forms.hpp
 * @brief Exterior calculus on a single 3D chart.
 *
 * Coefficients are stored in the chart's coordinate order (x0, x1, x2):
 *  - OneForm:   a0 dx0 + a1 dx1 + a2 dx2
 *  - VectorField: Y0 d/dx0 + Y1 d/dx1 + Y2 d/dx2
 *  - TwoForm:   w0 dx1^dx2 + w1 dx2^dx0 + w2 dx0^dx1   (axial vector w)
 *  - ThreeForm: c * (positive volume form of the chart)
 *
 * With this layout a one-form differential is the curl of its coefficient
 * vector, a two-form acts as w.(Y x Z), and alpha^beta has axial vector
 * a x b.
 */

#include <array>
#include <cmath>
#include <utility>

#include "bicontact/chart.hpp"
#include "bicontact/field.hpp"

namespace bicontact {

using TripleField = ErasedField<TripleShape>;

namespace detail {
inline TripleField triple_of(ScalarField a, ScalarField b, ScalarField c) {
    return TripleField([a = std::move(a), b = std::move(b), c = std::move(c)](const auto& p) {
        using T = std::decay_t<decltype(p[0])>;
        return Vec3<T>{a(p), b(p), c(p)};
    });
}

inline ScalarField component_of(const TripleField& f, int i) {
    return ScalarField([f, i](const auto& p) { return f(p)[i]; });
}

/// Jacobian J[i][j] = d f_i / d x_j at a point of type T.
template <class T>
std::array<Vec3<T>, 3> jacobian(const TripleField& f, const Point<T>& p) {
    const auto r = f(seed(p));
    std::array<Vec3<T>, 3> jac;
    for (std::size_t i = 0; i < 3; ++i) jac[i] = r[i].d;
    return jac;
}
}  // namespace detail

/// Common storage for the coefficient-triple objects.
class TripleOnChart {
public:
    TripleOnChart() = default;
    TripleOnChart(ChartPtr chart, TripleField coeffs) : chart_(std::move(chart)), coeffs_(std::move(coeffs)) {}
    TripleOnChart(ChartPtr chart, ScalarField a, ScalarField b, ScalarField c)
        : chart_(std::move(chart)), coeffs_(detail::triple_of(std::move(a), std::move(b), std::move(c))) {}

    const ChartPtr& chart() const { return chart_; }
    const TripleField& coeffs() const { return coeffs_; }

    template <class T>
    Vec3<T> operator()(const Point<T>& p) const {
        return coeffs_(p);
    }

    Vec3<double> at(const Point<double>& p) const { return coeffs_(p); }

    ScalarField component(int i) const { return detail::component_of(coeffs_, i); }

protected:
    ChartPtr chart_;
    TripleField coeffs_;
};

class VectorField : public TripleOnChart {
public:
    using TripleOnChart::TripleOnChart;
};

class OneForm : public TripleOnChart {
public:
    using TripleOnChart::TripleOnChart;

    /// alpha(Y) at a point.
    double apply(const Point<double>& p, const Vec3<double>& y) const { return dot(at(p), y); }
};

class TwoForm : public TripleOnChart {
public:
    using TripleOnChart::TripleOnChart;

    /// omega(Y, Z) at a point.
    double apply(const Point<double>& p, const Vec3<double>& y, const Vec3<double>& z) const {
        return dot(at(p), cross(y, z));
    }

    /// Coefficient of dx_i ^ dx_j (i != j), antisymmetric in (i, j).
    double coefficient(const Point<double>& p, int i, int j) const {
        if (i == j) return 0.0;
        const auto w = at(p);
        const int k = 3 - i - j;
        // dx_i^dx_j = +/- (axial slot k) with sign of the cyclic order (i,j,k)
        const bool cyclic = (j == (i + 1) % 3);
        return cyclic ? w[k] : -w[k];
    }
};

class ThreeForm {
public:
    ThreeForm() = default;
    ThreeForm(ChartPtr chart, ScalarField c) : chart_(std::move(chart)), coeff_(std::move(c)) {}

    const ChartPtr& chart() const { return chart_; }
    /// Coefficient relative to the chart's positive volume form.
    const ScalarField& coefficient() const { return coeff_; }
    double at(const Point<double>& p) const { return coeff_.value(p); }

private:
    ChartPtr chart_;
    ScalarField coeff_;
};

// ---------------------------------------------------------------------------
// constructors

inline OneForm make_one_form(ChartPtr chart, ScalarField a0, ScalarField a1, ScalarField a2) {
    return OneForm(std::move(chart), std::move(a0), std::move(a1), std::move(a2));
}

template <class F>
OneForm make_one_form(ChartPtr chart, F coefficients) {
    return OneForm(std::move(chart), TripleField(std::move(coefficients)));
}

template <class F>
VectorField make_vector_field(ChartPtr chart, F components) {
    return VectorField(std::move(chart), TripleField(std::move(components)));
}

inline VectorField coordinate_field(ChartPtr chart, int i) {
    return make_vector_field(std::move(chart), [i](const auto& p) {
        using T = std::decay_t<decltype(p[0])>;
        Vec3<T> e{T(0.0), T(0.0), T(0.0)};
        e[i] = T(1.0);
        return e;
    });
}

// ---------------------------------------------------------------------------
// algebra on one-forms and vector fields

inline OneForm operator+(const OneForm& a, const OneForm& b) {
    return make_one_form(a.chart(), [a, b](const auto& p) {
        const auto x = a(p);
        const auto y = b(p);
        return decltype(x){x[0] + y[0], x[1] + y[1], x[2] + y[2]};
    });
}

inline OneForm operator-(const OneForm& a, const OneForm& b) {
    return make_one_form(a.chart(), [a, b](const auto& p) {
        const auto x = a(p);
        const auto y = b(p);
        return decltype(x){x[0] - y[0], x[1] - y[1], x[2] - y[2]};
    });
}

inline OneForm operator*(const ScalarField& f, const OneForm& a) {
    return make_one_form(a.chart(), [f, a](const auto& p) {
        const auto x = a(p);
        const auto c = f(p);
        return decltype(x){c * x[0], c * x[1], c * x[2]};
    });
}

inline OneForm operator*(double c, const OneForm& a) { return ScalarField::constant(c) * a; }

inline VectorField operator+(const VectorField& a, const VectorField& b) {
    return make_vector_field(a.chart(), [a, b](const auto& p) {
        const auto x = a(p);
        const auto y = b(p);
        return decltype(x){x[0] + y[0], x[1] + y[1], x[2] + y[2]};
    });
}

inline VectorField operator-(const VectorField& a, const VectorField& b) {
    return make_vector_field(a.chart(), [a, b](const auto& p) {
        const auto x = a(p);
        const auto y = b(p);
        return decltype(x){x[0] - y[0], x[1] - y[1], x[2] - y[2]};
    });
}

inline VectorField operator*(const ScalarField& f, const VectorField& a) {
    return make_vector_field(a.chart(), [f, a](const auto& p) {
        const auto x = a(p);
        const auto c = f(p);
        return decltype(x){c * x[0], c * x[1], c * x[2]};
    });
}

inline VectorField operator*(double c, const VectorField& a) { return ScalarField::constant(c) * a; }

inline VectorField operator-(const VectorField& a) { return -1.0 * a; }

/// alpha(Y) as a scalar field.
inline ScalarField evaluate(const OneForm& a, const VectorField& y) {
    return ScalarField([a, y](const auto& p) { return dot(a(p), y(p)); });
}

// ---------------------------------------------------------------------------
// exterior derivative

/// df for a function on the chart.
inline OneForm exterior_derivative(const ScalarField& f, ChartPtr chart) {
    return make_one_form(std::move(chart), [f](const auto& p) { return f(seed(p)).d; });
}

/// d alpha: the curl of the coefficient vector.
inline TwoForm exterior_derivative(const OneForm& a) {
    const TripleField c = a.coeffs();
    return TwoForm(a.chart(), TripleField([c](const auto& p) {
                       const auto j = detail::jacobian(c, p);
                       using T = std::decay_t<decltype(p[0])>;
                       return Vec3<T>{j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]};
                   }));
}

/// d omega for a two-form: divergence of the axial vector, converted to the
/// chart's positive volume.
inline ThreeForm exterior_derivative(const TwoForm& w) {
    const TripleField c = w.coeffs();
    const double sign = w.chart()->volume_sign();
    return ThreeForm(w.chart(), ScalarField([c, sign](const auto& p) {
                         const auto j = detail::jacobian(c, p);
                         return (j[0][0] + j[1][1] + j[2][2]) * sign;
                     }));
}

inline TwoForm wedge(const OneForm& a, const OneForm& b) {
    return TwoForm(a.chart(), TripleField([a, b](const auto& p) { return cross(a(p), b(p)); }));
}

inline ThreeForm wedge(const OneForm& a, const TwoForm& w) {
    const double sign = a.chart()->volume_sign();
    return ThreeForm(a.chart(), ScalarField([a, w, sign](const auto& p) { return dot(a(p), w(p)) * sign; }));
}

/// alpha ^ d alpha against the chart's positive volume ordering.
inline ThreeForm wedge_contact(const OneForm& a) {
    const TripleField c = a.coeffs();
    const double sign = a.chart()->volume_sign();
    return ThreeForm(a.chart(), ScalarField([c, sign](const auto& p) {
                         const auto r = c(seed(p));
                         using T = std::decay_t<decltype(p[0])>;
                         const Vec3<T> val{r[0].v, r[1].v, r[2].v};
                         const Vec3<T> curl{r[2].d[1] - r[1].d[2], r[0].d[2] - r[2].d[0], r[1].d[0] - r[0].d[1]};
                         return dot(val, curl) * sign;
                     }));
}

// ---------------------------------------------------------------------------
// vector field calculus

/// [Y, Z]^i = Y^j d_j Z^i - Z^j d_j Y^i.
inline VectorField lie_bracket(const VectorField& y, const VectorField& z) {
    const TripleField cy = y.coeffs();
    const TripleField cz = z.coeffs();
    return make_vector_field(y.chart(), [cy, cz](const auto& p) {
        using T = std::decay_t<decltype(p[0])>;
        const auto ry = cy(seed(p));
        const auto rz = cz(seed(p));
        Vec3<T> out;
        for (std::size_t i = 0; i < 3; ++i) {
            T acc(0.0);
            for (std::size_t j = 0; j < 3; ++j) acc = acc + ry[j].v * rz[i].d[j] - rz[j].v * ry[i].d[j];
            out[i] = acc;
        }
        return out;
    });
}

/// Divergence with respect to the coordinate volume.
inline ScalarField divergence(const VectorField& y) {
    const TripleField c = y.coeffs();
    return ScalarField([c](const auto& p) {
        const auto j = detail::jacobian(c, p);
        return j[0][0] + j[1][1] + j[2][2];
    });
}

/// Divergence with respect to the volume rho * dV (rho > 0):
/// div_rho Y = div Y + Y(log rho).
inline ScalarField divergence(const VectorField& y, const ScalarField& density) {
    const TripleField c = y.coeffs();
    return ScalarField([c, density](const auto& p) {
        const auto r = c(seed(p));
        const auto rho = density(seed(p));
        auto acc = r[0].d[0] + r[1].d[1] + r[2].d[2];
        for (std::size_t i = 0; i < 3; ++i) acc = acc + r[i].v * rho.d[i] / rho.v;
        return acc;
    });
}

}  // namespace bicontact
