#pragma once

/**
 * @file chart_map.hpp
 * @brief Smooth maps between charts and pullback of one-forms.
 */

#include <utility>

#include "bicontact/forms.hpp"
#include "bicontact/profile.hpp"

namespace bicontact {

/// A smooth map between charts given by its three component functions.
/// Components may leave the fundamental domain of a periodic coordinate;
/// fields on the target are expected to be periodic there.
class ChartMap {
public:
    ChartMap() = default;
    ChartMap(ChartPtr source, ChartPtr target, TripleField components)
        : source_(std::move(source)), target_(std::move(target)), comp_(std::move(components)) {}

    const ChartPtr& source() const { return source_; }
    const ChartPtr& target() const { return target_; }
    const TripleField& components() const { return comp_; }

    template <class T>
    Point<T> operator()(const Point<T>& p) const {
        return comp_(p);
    }

    /// J[i][j] = d phi_i / d x_j.
    std::array<Vec3<double>, 3> jacobian(const Point<double>& p) const { return detail::jacobian(comp_, p); }

private:
    ChartPtr source_;
    ChartPtr target_;
    TripleField comp_;
};

inline ChartMap identity_map(ChartPtr chart) {
    return ChartMap(chart, chart, TripleField([](const auto& p) { return p; }));
}

/// outer o inner.
inline ChartMap compose(const ChartMap& outer, const ChartMap& inner) {
    const TripleField a = outer.components();
    const TripleField b = inner.components();
    return ChartMap(inner.source(), outer.target(), TripleField([a, b](const auto& p) { return a(b(p)); }));
}

/// The shear (s, v, w) -> (s + f(v), v, w) on a flow-box chart.
inline ChartMap shear_map(ChartPtr chart, const ShearProfile& shear) {
    const PiecewisePoly f = shear.f();
    return ChartMap(chart, chart, TripleField([f](const auto& p) {
                        using T = std::decay_t<decltype(p[0])>;
                        return Point<T>{p[0] + f.eval(p[1]), p[1], p[2]};
                    }));
}

/// phi^* omega: (phi^* omega)_j(p) = sum_i omega_i(phi(p)) d phi_i / d x_j.
inline OneForm pullback_oneform(const ChartMap& phi, const OneForm& omega) {
    const TripleField m = phi.components();
    const TripleField w = omega.coeffs();
    return make_one_form(phi.source(), [m, w](const auto& p) {
        using T = std::decay_t<decltype(p[0])>;
        const auto image = m(seed(p));
        const Point<T> q{image[0].v, image[1].v, image[2].v};
        const auto coeff = w(q);
        Vec3<T> out{T(0.0), T(0.0), T(0.0)};
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t i = 0; i < 3; ++i) out[j] = out[j] + coeff[i] * image[i].d[j];
        return out;
    });
}

}  // namespace bicontact
