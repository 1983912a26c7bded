#pragma once

#include "tsvar/calculus.hpp"
#include "tsvar/dual.hpp"
#include "tsvar/errors.hpp"
#include "tsvar/expression.hpp"
#include "tsvar/grid_function.hpp"
#include "tsvar/io.hpp"
#include "tsvar/lagrangian.hpp"
#include "tsvar/random.hpp"
#include "tsvar/solver.hpp"
#include "tsvar/timescale.hpp"
#include "tsvar/variational.hpp"
