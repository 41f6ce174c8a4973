#pragma once

#include "cref/config.hpp"
#include "cref/constants.hpp"
#include "cref/csv.hpp"
#include "cref/devmodel.hpp"
#include "cref/errors.hpp"
#include "cref/fom.hpp"
#include "cref/refsim.hpp"
#include "cref/scm.hpp"
#include "cref/series.hpp"
#include "cref/sizing.hpp"
#include "cref/vref4t.hpp"
