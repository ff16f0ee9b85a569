#pragma once

// Umbrella header: particle-based simulator + analytical model library for
// the diffusive channel with a reversibly adsorbing spherical receiver.

#include "adrx/channel_response.hpp"
#include "adrx/config.hpp"
#include "adrx/csv.hpp"
#include "adrx/errors.hpp"
#include "adrx/experiment.hpp"
#include "adrx/geometry.hpp"
#include "adrx/laplace.hpp"
#include "adrx/params.hpp"
#include "adrx/quadrature.hpp"
#include "adrx/rng.hpp"
#include "adrx/series.hpp"
#include "adrx/simulator.hpp"
#include "adrx/version.hpp"
