#pragma once

#include "sdct/error.hpp"
#include "sdct/geometry_lab.hpp"
#include "sdct/harness.hpp"
#include "sdct/lp_rounding.hpp"
#include "sdct/matrix_io.hpp"
#include "sdct/model.hpp"
#include "sdct/objective.hpp"
#include "sdct/parallel.hpp"
#include "sdct/recovery.hpp"
#include "sdct/rng.hpp"
#include "sdct/trm.hpp"
