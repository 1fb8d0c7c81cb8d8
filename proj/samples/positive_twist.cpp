// Builds the flow-box model, performs a q = 2 surgery and prints the checks
// together with the holonomy twist.

#include <cstdio>

#include "bicontact/bicontact.hpp"

int main() {
    using namespace bicontact;
    const auto model = flow_box_bicontact(0.3, 1.0);
    const double eps = 0.5;
    const double lam = CutoffProfile::near_linear(eps).max_slope();
    const auto spec = make_surgery_spec(2, 0.9 * admissible_delta(2, eps, lam), eps);

    const auto glued = lt_surgery(spec, model);
    for (const auto& r : glued.reports) std::printf("%s\n", r.summary().c_str());
    for (const auto& w : glued.warnings) std::printf("warning: %s\n", w.c_str());

    const auto twist = goodman_twist_count(glued);
    std::printf("twist %d (raw %.6f)\n", twist.twist, twist.raw);
    return glued.contact_pass() && twist.twist == -2 ? 0 : 1;
}
