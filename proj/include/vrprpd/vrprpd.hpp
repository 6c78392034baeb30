#pragma once

#include "random.hpp"
#include "instance.hpp"
#include "solution.hpp"
#include "schedule.hpp"
#include "insertion.hpp"
#include "repair.hpp"
#include "local_search.hpp"
#include "baselines.hpp"
#include "alns.hpp"
#include "brkga.hpp"
#include "oracle.hpp"
#include "milp.hpp"
#include "stats.hpp"
#include "config.hpp"
#include "experiment.hpp"
