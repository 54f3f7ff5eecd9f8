#pragma once

#include "mei/core/carrier.hpp"
#include "mei/core/coupling.hpp"
#include "mei/core/error.hpp"
#include "mei/core/principles.hpp"
#include "mei/core/scenario.hpp"
#include "mei/core/topology.hpp"
#include "mei/devices/dual_role_plant.hpp"
#include "mei/devices/solar.hpp"
#include "mei/devices/st_caes.hpp"
#include "mei/ems/dispatch.hpp"
#include "mei/ems/exchange.hpp"
#include "mei/ems/hinf.hpp"
#include "mei/ems/iopf.hpp"
#include "mei/ems/linear_program.hpp"
#include "mei/ems/mode.hpp"
#include "mei/ems/stackelberg_dispatch.hpp"
#include "mei/ems/timescale.hpp"
#include "mei/game/box.hpp"
#include "mei/game/golden_section.hpp"
#include "mei/game/nash.hpp"
#include "mei/game/saddle.hpp"
#include "mei/game/stackelberg.hpp"
#include "mei/io/number_format.hpp"
#include "mei/io/report.hpp"
#include "mei/io/scenario_io.hpp"
#include "mei/planner/bargain.hpp"
#include "mei/planner/pareto.hpp"
#include "mei/planner/portfolio.hpp"
