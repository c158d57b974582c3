#pragma once

#include "ruingame/commands.hpp"
#include "ruingame/config.hpp"
#include "ruingame/csv.hpp"
#include "ruingame/errors.hpp"
#include "ruingame/game.hpp"
#include "ruingame/grid_game.hpp"
#include "ruingame/hjb.hpp"
#include "ruingame/level.hpp"
#include "ruingame/manifest.hpp"
#include "ruingame/market.hpp"
#include "ruingame/parallel.hpp"
#include "ruingame/policy.hpp"
#include "ruingame/problem.hpp"
#include "ruingame/quadrature.hpp"
#include "ruingame/rng.hpp"
#include "ruingame/run_config.hpp"
#include "ruingame/saddle.hpp"
#include "ruingame/scalar_function.hpp"
#include "ruingame/sde_engine.hpp"
#include "ruingame/state_ode.hpp"
#include "ruingame/validation.hpp"
