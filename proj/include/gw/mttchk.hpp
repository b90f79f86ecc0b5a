#pragma once

#include "gw/mttchk/ast.hpp"
#include "gw/mttchk/check.hpp"
#include "gw/mttchk/parse.hpp"
