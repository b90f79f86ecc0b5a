#pragma once

#include "gw/psh/json.hpp"
#include "gw/psh/kan.hpp"
#include "gw/psh/presheaf.hpp"
