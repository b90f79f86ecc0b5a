#pragma once

#include "gw/site/json.hpp"
#include "gw/site/sheaf.hpp"
#include "gw/site/sieve.hpp"
#include "gw/site/space.hpp"
