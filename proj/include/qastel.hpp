#pragma once

#include "qastel/energy.hpp"
#include "qastel/sets.hpp"
#include "qastel/game.hpp"
#include "qastel/game_io.hpp"
#include "qastel/fixpoint.hpp"
#include "qastel/strategy_template.hpp"
#include "qastel/scc.hpp"
#include "qastel/pestel.hpp"
#include "qastel/mistel.hpp"
#include "qastel/combine.hpp"
#include "qastel/runtime.hpp"
#include "qastel/oracles.hpp"
#include "qastel/random.hpp"
#include "qastel/bench.hpp"
