#pragma once

// Umbrella header.

#include "kacjl/bench.hpp"
#include "kacjl/error.hpp"
#include "kacjl/fjlt.hpp"
#include "kacjl/io.hpp"
#include "kacjl/points.hpp"
#include "kacjl/rng.hpp"
#include "kacjl/sketch.hpp"
#include "kacjl/verify/coupling.hpp"
#include "kacjl/verify/jl.hpp"
#include "kacjl/verify/moments.hpp"
#include "kacjl/verify/report.hpp"
#include "kacjl/verify/rip.hpp"
#include "kacjl/verify/symmetry.hpp"
#include "kacjl/verify/trials.hpp"
#include "kacjl/walk.hpp"
