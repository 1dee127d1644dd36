#pragma once

#include "lanczos/errors.hpp"
#include "lanczos/harness.hpp"
#include "lanczos/linalg.hpp"
#include "lanczos/matrix_market.hpp"
#include "lanczos/problems.hpp"
#include "lanczos/rng.hpp"
#include "lanczos/solver.hpp"
#include "lanczos/solver_types.hpp"
#include "lanczos/switching.hpp"
