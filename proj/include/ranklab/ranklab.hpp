#pragma once

/// Umbrella header for the ranklab library.

#include "ranklab/error.hpp"
#include "ranklab/matgroup.hpp"
#include "ranklab/modring.hpp"
#include "ranklab/prank.hpp"
#include "ranklab/report.hpp"
#include "ranklab/selftest.hpp"
#include "ranklab/symbolalg.hpp"
#include "ranklab/symplectic.hpp"
#include "ranklab/verdict.hpp"
