#pragma once

#include "constants.hpp"
#include "compensated.hpp"
#include "special_functions.hpp"
#include "su11.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"
#include "energy_shift.hpp"
#include "tables.hpp"
