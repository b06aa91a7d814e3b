#pragma once

// Umbrella header.

#include "numkit.hpp"
#include "specfun.hpp"
#include "sineprod.hpp"
#include "rademacher.hpp"
#include "saddle.hpp"
#include "expansions.hpp"
