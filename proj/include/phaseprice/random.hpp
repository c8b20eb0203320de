#pragma once

#include <cstdint>
#include <random>

namespace phaseprice {

// 53-bit uniform in [0, 1); avoids distribution-object state so that draw
// counts per event stay fixed and streams are portable.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1]; safe as an argument to log().
inline double uniform01_open(std::mt19937_64& rng) {
    return 1.0 - uniform01(rng);
}

}  // namespace phaseprice
