#pragma once

#include "cdperc/cluster.hpp"
#include "cdperc/contour.hpp"
#include "cdperc/dynamics.hpp"
#include "cdperc/errors.hpp"
#include "cdperc/estimators.hpp"
#include "cdperc/lattice.hpp"
#include "cdperc/peierls.hpp"
#include "cdperc/perm_oracle.hpp"
#include "cdperc/rational.hpp"
#include "cdperc/rng.hpp"
#include "cdperc/stats.hpp"
#include "cdperc/tree.hpp"
