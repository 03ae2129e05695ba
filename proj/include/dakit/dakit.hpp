#pragma once

// =============================================================================
// FILE: dakit/dakit.hpp
// BRIEF: Umbrella header for the full library.
// =============================================================================

#include "dakit/bench.hpp"
#include "dakit/core.hpp"
#include "dakit/csr.hpp"
#include "dakit/dataset.hpp"
#include "dakit/rng.hpp"
#include "dakit/sparse.hpp"
#include "dakit/stats.hpp"
#include "dakit/svm.hpp"
#include "dakit/wss.hpp"
