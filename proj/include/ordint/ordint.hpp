#pragma once

#include "ordint/errors.hpp"
#include "ordint/lattice.hpp"
#include "ordint/summation.hpp"
#include "ordint/regulator.hpp"
#include "ordint/convergence.hpp"
#include "ordint/summability.hpp"
#include "ordint/sets.hpp"
#include "ordint/measure.hpp"
#include "ordint/partition.hpp"
#include "ordint/integrand.hpp"
#include "ordint/integrators.hpp"
#include "ordint/theorems.hpp"
#include "ordint/dsl.hpp"
#include "ordint/fixtures.hpp"
#include "ordint/experiment.hpp"
#include "ordint/suites.hpp"
