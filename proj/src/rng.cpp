#include "corrbound/rng.hpp"

#include <cmath>

namespace corrbound {

double Xoshiro256::exponential(double rate) noexcept {
    if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
    // Midpoint of a 2^-53 cell: strictly inside (0, 1), so holding times are > 0.
    const double u = (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    return -std::log(u) / rate;
}

} // namespace corrbound
