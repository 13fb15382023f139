#pragma once

#include "bssd/criteria.hpp"
#include "bssd/errors.hpp"
#include "bssd/exact.hpp"
#include "bssd/expansions.hpp"
#include "bssd/functional.hpp"
#include "bssd/grid_posterior.hpp"
#include "bssd/models.hpp"
#include "bssd/montecarlo.hpp"
#include "bssd/numerics.hpp"
#include "bssd/polynomial.hpp"
#include "bssd/rng.hpp"
#include "bssd/specfun.hpp"
#include "bssd/tables.hpp"
