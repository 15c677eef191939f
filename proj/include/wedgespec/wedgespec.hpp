#pragma once

#include "wedgespec/group.hpp"
#include "wedgespec/linalg.hpp"
#include "wedgespec/operators.hpp"
#include "wedgespec/quadrature.hpp"
#include "wedgespec/special.hpp"
#include "wedgespec/symbols.hpp"
#include "wedgespec/transmission.hpp"
