#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bicontact/dual.hpp"
#include "bicontact/errors.hpp"

namespace bicontact {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

/// A coordinate box with optional periodic identifications and a fixed
/// positive volume ordering.
class Chart {
public:
    struct Axis {
        std::string name;
        Interval range;
        bool periodic = false;
    };

    /// `volume_order` lists coordinate names so that d(v0)^d(v1)^d(v2) is the
    /// positive volume form, e.g. {"t", "w", "s"}.
    Chart(std::array<Axis, 3> axes, std::array<std::string, 3> volume_order) : axes_(std::move(axes)) {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = i + 1; j < 3; ++j) {
                if (axes_[i].name == axes_[j].name)
                    throw InvariantError("chart coordinate names must be distinct: " + axes_[i].name);
            }
            if (axes_[i].range.length() <= 0.0)
                throw InvariantError("empty range for coordinate " + axes_[i].name);
        }
        std::array<int, 3> perm{};
        for (std::size_t k = 0; k < 3; ++k) {
            const int idx = index_of(volume_order[k]);
            if (idx < 0) throw InvariantError("volume ordering names unknown coordinate " + volume_order[k]);
            perm[k] = idx;
        }
        if (perm[0] == perm[1] || perm[1] == perm[2] || perm[0] == perm[2])
            throw InvariantError("volume ordering is not a permutation of the coordinates");
        volume_order_ = volume_order;
        // sign of the permutation perm relative to (0,1,2)
        int inversions = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b)
                if (perm[a] > perm[b]) ++inversions;
        volume_sign_ = (inversions % 2 == 0) ? 1 : -1;
    }

    const Axis& axis(std::size_t i) const { return axes_[i]; }
    const std::string& name(std::size_t i) const { return axes_[i].name; }
    const Interval& range(std::size_t i) const { return axes_[i].range; }
    bool periodic(std::size_t i) const { return axes_[i].periodic; }
    double period(std::size_t i) const { return axes_[i].range.length(); }
    const std::array<std::string, 3>& volume_order() const { return volume_order_; }

    /// +1 when d(x0)^d(x1)^d(x2) is the positive volume, -1 otherwise.
    int volume_sign() const { return volume_sign_; }

    int index_of(const std::string& name) const {
        for (int i = 0; i < 3; ++i)
            if (axes_[i].name == name) return i;
        return -1;
    }

    /// Wrap periodic coordinates into [lo, hi), accumulating whole periods.
    /// Points within 1e-9 periods below hi snap to lo.
    Point<double> wrap(const Point<double>& p, std::array<long, 3>* winding = nullptr) const {
        Point<double> out = p;
        for (std::size_t i = 0; i < 3; ++i) {
            if (!axes_[i].periodic) continue;
            const double per = period(i);
            double turns = std::floor((p[i] - axes_[i].range.lo) / per);
            out[i] = p[i] - turns * per;
            if (axes_[i].range.hi - out[i] < 1e-9 * per) {
                out[i] = axes_[i].range.lo;
                turns += 1.0;
            }
            if (winding) (*winding)[i] += static_cast<long>(turns);
        }
        return out;
    }

    /// Returns the index of the first non-periodic coordinate out of range,
    /// or -1. `side` is set to -1 (below) or +1 (above).
    int exit_axis(const Point<double>& p, int* side = nullptr, double slack = 1e-12) const {
        for (int i = 0; i < 3; ++i) {
            if (axes_[i].periodic) continue;
            const auto& r = axes_[i].range;
            if (p[i] < r.lo - slack) {
                if (side) *side = -1;
                return i;
            }
            if (p[i] > r.hi + slack) {
                if (side) *side = +1;
                return i;
            }
        }
        return -1;
    }

    bool contains(const Point<double>& p, double slack = 1e-12) const { return exit_axis(p, nullptr, slack) < 0; }

    std::string face_name(int axis, int side) const {
        std::ostringstream os;
        os << axes_[axis].name << "=" << (side < 0 ? axes_[axis].range.lo : axes_[axis].range.hi);
        return os.str();
    }

    std::string describe(const Point<double>& p) const {
        std::ostringstream os;
        os.precision(10);
        os << "(";
        for (std::size_t i = 0; i < 3; ++i) os << (i ? ", " : "") << axes_[i].name << "=" << p[i];
        os << ")";
        return os.str();
    }

    /// Same chart with different ranges on the non-periodic axes.
    Chart with_range(std::size_t i, Interval r) const {
        auto axes = axes_;
        axes[i].range = r;
        return Chart(axes, volume_order_);
    }

private:
    std::array<Axis, 3> axes_;
    std::array<std::string, 3> volume_order_;
    int volume_sign_ = 1;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Flow-box chart (s, v, w): s periodic with period 2 pi, dV = ds^dv^dw.
inline ChartPtr make_flow_box_chart(Interval v_range, Interval w_range) {
    return std::make_shared<const Chart>(
        std::array<Chart::Axis, 3>{Chart::Axis{"s", {0.0, two_pi}, true}, Chart::Axis{"v", v_range, false},
                                   Chart::Axis{"w", w_range, false}},
        std::array<std::string, 3>{"s", "v", "w"});
}

/// Chart around a Legendrian knot of a contact form dt + w ds:
/// coordinates (t, s, w), s periodic, dV = dt^dw^ds.
inline ChartPtr make_fh_chart(Interval t_range, Interval w_range) {
    return std::make_shared<const Chart>(
        std::array<Chart::Axis, 3>{Chart::Axis{"t", t_range, false}, Chart::Axis{"s", {0.0, two_pi}, true},
                                   Chart::Axis{"w", w_range, false}},
        std::array<std::string, 3>{"t", "w", "s"});
}

/// Unit 3-torus (x, y, z), dV = dx^dy^dz.
inline ChartPtr make_t3_chart() {
    return std::make_shared<const Chart>(
        std::array<Chart::Axis, 3>{Chart::Axis{"x", {0.0, 1.0}, true}, Chart::Axis{"y", {0.0, 1.0}, true},
                                   Chart::Axis{"z", {0.0, 1.0}, true}},
        std::array<std::string, 3>{"x", "y", "z"});
}

}  // namespace bicontact
