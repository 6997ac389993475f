#pragma once

// Umbrella header.

#include "npce/economy.hpp"
#include "npce/errors.hpp"
#include "npce/experiments.hpp"
#include "npce/instance.hpp"
#include "npce/linalg.hpp"
#include "npce/operators.hpp"
#include "npce/oracle.hpp"
#include "npce/probgen.hpp"
#include "npce/solvers.hpp"
#include "npce/vi_core.hpp"
