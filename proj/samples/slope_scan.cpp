// Characteristic slope of the Lambda model as the box height approaches pi/2.

#include <cstdio>

#include "bicontact/bicontact.hpp"

int main() {
    using namespace bicontact;
    LambdaModel m;
    for (double eps : {0.5, 1.0, 1.2, 1.4, 1.5, 1.55}) {
        const auto r = characteristic_slope(m.bicontact(), 0.3, eps);
        const auto range = admissible_range_from_slope(r.k, r.uncertainty);
        std::printf("eps %.2f  k %.9f  +- %.1e  q_min %d\n", eps, r.k, r.uncertainty, range.q_min);
    }
}
