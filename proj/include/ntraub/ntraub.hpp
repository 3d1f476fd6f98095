#pragma once

// Umbrella header for the three-step fifth-order iteration library and its
// generalized-Lipschitz convergence toolkit.

#include "ntraub/averages.hpp"
#include "ntraub/bounds.hpp"
#include "ntraub/errors.hpp"
#include "ntraub/linalg.hpp"
#include "ntraub/problems.hpp"
#include "ntraub/quadrature.hpp"
#include "ntraub/radii.hpp"
#include "ntraub/solver.hpp"
