#pragma once

// Exact-integer engine for chip-firing on toppling matrices: generalized
// parking functions, recurrent configurations, the d - u bijection between
// them, lattice classes, and the auxiliary sandpile digraph.

#include "chipfire/core.hpp"
#include "chipfire/digraph.hpp"
#include "chipfire/lattice.hpp"
#include "chipfire/matrix.hpp"
#include "chipfire/parking.hpp"
#include "chipfire/random_gen.hpp"
#include "chipfire/sandpile.hpp"
