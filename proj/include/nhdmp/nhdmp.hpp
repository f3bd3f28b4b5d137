#pragma once

#include "numeric.hpp"
#include "state_space.hpp"
#include "matrix.hpp"
#include "kernels.hpp"
#include "process_io.hpp"
#include "ergodicity.hpp"
#include "minorization.hpp"
#include "qsp.hpp"
