#pragma once

#include "gw/fincat/category.hpp"
#include "gw/fincat/functor.hpp"
#include "gw/fincat/json.hpp"
