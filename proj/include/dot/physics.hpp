#pragma once

#include <numbers>

namespace dot {

/// Constants of the frequency-domain diffusion model on a 2D domain.
struct PhysicsConstants {
    double c = 2.99792458e11 / 1.4;       // speed of light in medium, mm/s
    double zeta = 1.0 / std::numbers::pi; // dimension constant, 1/pi in 2D
    double alpha = 1.0;                   // boundary reflection parameter
    int dim = 2;

    static PhysicsConstants tissue(double refractive_index = 1.4, double alpha = 1.0) {
        PhysicsConstants p;
        p.c = 2.99792458e11 / refractive_index;
        p.alpha = alpha;
        return p;
    }
};

}  // namespace dot
