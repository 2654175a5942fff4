#pragma once

#include "apc/errors.hpp"
#include "apc/numeric.hpp"
#include "apc/state.hpp"
#include "apc/gates.hpp"
#include "apc/decompositions.hpp"
#include "apc/circuits.hpp"
#include "apc/netlist.hpp"
#include "apc/lowering.hpp"
#include "apc/measurement.hpp"
#include "apc/nonlinear.hpp"
#include "apc/json_io.hpp"
#include "apc/cli.hpp"
