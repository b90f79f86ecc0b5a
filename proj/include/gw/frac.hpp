#pragma once

#include "gw/frac/fraction.hpp"
#include "gw/frac/json.hpp"
