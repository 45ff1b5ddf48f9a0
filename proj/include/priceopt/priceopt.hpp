#pragma once

#include "priceopt/demand.hpp"
#include "priceopt/errors.hpp"
#include "priceopt/io.hpp"
#include "priceopt/oracle.hpp"
#include "priceopt/policy.hpp"
#include "priceopt/propensity.hpp"
#include "priceopt/quadrature.hpp"
#include "priceopt/scenario.hpp"
#include "priceopt/scenario_json.hpp"
#include "priceopt/simulator.hpp"
#include "priceopt/solver_basic.hpp"
#include "priceopt/solver_tvm.hpp"
#include "priceopt/value_weight.hpp"
