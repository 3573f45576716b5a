#pragma once

// Umbrella header.

#include "spectacle/rational.hpp"
#include "spectacle/arith.hpp"
#include "spectacle/matrix.hpp"
#include "spectacle/quad_space.hpp"
#include "spectacle/sym_rep.hpp"
#include "spectacle/caps.hpp"
#include "spectacle/qseries.hpp"
#include "spectacle/theta11.hpp"
#include "spectacle/shintani_lift.hpp"
#include "spectacle/periods.hpp"
#include "spectacle/acceptance.hpp"
