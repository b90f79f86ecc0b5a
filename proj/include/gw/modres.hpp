#pragma once

#include "gw/modres/ext.hpp"
#include "gw/modres/injective.hpp"
#include "gw/modres/json.hpp"
#include "gw/modres/ring.hpp"
