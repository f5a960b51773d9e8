#pragma once

#include "digitlab/base_digits.hpp"
#include "digitlab/constant_stream.hpp"
#include "digitlab/csv.hpp"
#include "digitlab/errors.hpp"
#include "digitlab/lil_analysis.hpp"
#include "digitlab/power_walk.hpp"
#include "digitlab/schedule.hpp"
#include "digitlab/spigot.hpp"
