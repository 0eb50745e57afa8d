#pragma once
// Umbrella header: the whole toolkit.

#include "config.hpp"   // IWYU pragma: export
#include "control.hpp"  // IWYU pragma: export
#include "csv.hpp"      // IWYU pragma: export
#include "equilibria.hpp" // IWYU pragma: export
#include "estimator.hpp"  // IWYU pragma: export
#include "ode.hpp"        // IWYU pragma: export
#include "params.hpp"     // IWYU pragma: export
#include "plant.hpp"      // IWYU pragma: export
#include "presets.hpp"    // IWYU pragma: export
#include "sim.hpp"        // IWYU pragma: export
#include "stability.hpp"  // IWYU pragma: export
#include "state.hpp"      // IWYU pragma: export
#include "svg.hpp"        // IWYU pragma: export
#include "sweep.hpp"      // IWYU pragma: export
