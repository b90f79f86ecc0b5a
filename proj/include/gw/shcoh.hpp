#pragma once

#include "gw/shcoh/cech.hpp"
#include "gw/shcoh/godement.hpp"
#include "gw/shcoh/json.hpp"
#include "gw/shcoh/les.hpp"
#include "gw/shcoh/sheaf.hpp"
