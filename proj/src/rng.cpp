#include "qcs/rng.hpp"

#include <cmath>

namespace qcs {

double CounterRng::next_normal() {
    // Avoid log(0); the shifted draw is uniform in (0, 1].
    double u1 = 1.0 - next_double();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace qcs
