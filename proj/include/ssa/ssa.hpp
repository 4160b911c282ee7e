#pragma once

#include "ssa/annealers.hpp"
#include "ssa/bench_io.hpp"
#include "ssa/errors.hpp"
#include "ssa/hyperparams.hpp"
#include "ssa/ising.hpp"
#include "ssa/parallel.hpp"
#include "ssa/rng.hpp"
#include "ssa/search.hpp"
