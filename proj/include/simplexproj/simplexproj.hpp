#pragma once

// Umbrella header: simplex projection under an SPD-matrix metric,
// minimum-variance portfolio construction, return-panel ingestion,
// and fixed-weight backtesting.

#include "simplexproj/backtest.hpp"
#include "simplexproj/csv.hpp"
#include "simplexproj/dates.hpp"
#include "simplexproj/errors.hpp"
#include "simplexproj/face.hpp"
#include "simplexproj/hyperplane.hpp"
#include "simplexproj/ingest.hpp"
#include "simplexproj/linalg.hpp"
#include "simplexproj/metric.hpp"
#include "simplexproj/oracle.hpp"
#include "simplexproj/projection.hpp"
#include "simplexproj/stats.hpp"
