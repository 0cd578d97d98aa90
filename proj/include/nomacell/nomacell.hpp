#pragma once

#include "nomacell/cell_load.hpp"
#include "nomacell/common.hpp"
#include "nomacell/distance.hpp"
#include "nomacell/meta.hpp"
#include "nomacell/numerics.hpp"
#include "nomacell/params.hpp"
#include "nomacell/performance.hpp"
#include "nomacell/ra.hpp"
#include "nomacell/rng.hpp"
#include "nomacell/simulator.hpp"
