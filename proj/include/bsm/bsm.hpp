#pragma once

#include "bsm/beamsplitter.hpp"
#include "bsm/core.hpp"
#include "bsm/correlation.hpp"
#include "bsm/oracle.hpp"
#include "bsm/sources.hpp"
#include "bsm/symmetry.hpp"
#include "bsm/units.hpp"
