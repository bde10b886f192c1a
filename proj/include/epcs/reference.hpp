#pragma once

#include "epcs/systems.hpp"
#include "epcs/types.hpp"

namespace epcs {

/// y(t_end) for a system without a closed-form solution: classical RK4,
/// starting at h = 1e-4 and halving until two successive results agree to
/// `agreement` in the max-norm.
Vector rk4_reference(const PoissonSystem& system, const Vector& y0, double t_end,
                     double agreement = 1e-10);

}  // namespace epcs
