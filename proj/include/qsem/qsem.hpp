#pragma once

// Umbrella header: categorial parsing, tensor semantics, contraction by
// exchange measurement, reading superposition, and amplified search.

#include "qsem/contraction.hpp"
#include "qsem/density.hpp"
#include "qsem/derivation.hpp"
#include "qsem/errors.hpp"
#include "qsem/grover.hpp"
#include "qsem/json_io.hpp"
#include "qsem/layout.hpp"
#include "qsem/numeric.hpp"
#include "qsem/plan.hpp"
#include "qsem/semantics.hpp"
#include "qsem/state.hpp"
#include "qsem/syntax.hpp"
