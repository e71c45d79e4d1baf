#pragma once

#include "hawkes/event_series.hpp"
#include "hawkes/fit.hpp"
#include "hawkes/io.hpp"
#include "hawkes/kernel.hpp"
#include "hawkes/likelihood.hpp"
#include "hawkes/model.hpp"
#include "hawkes/optimize.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/precompute.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/stats.hpp"
#include "hawkes/tying.hpp"
