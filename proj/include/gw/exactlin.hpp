#pragma once

#include "gw/exactlin/fp_group.hpp"
#include "gw/exactlin/json.hpp"
#include "gw/exactlin/matrix.hpp"
#include "gw/exactlin/normal_form.hpp"
#include "gw/exactlin/subgroup.hpp"
