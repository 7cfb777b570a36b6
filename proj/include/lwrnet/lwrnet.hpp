#pragma once

#include "lwrnet/errors.hpp"
#include "lwrnet/fundamentals.hpp"
#include "lwrnet/junction.hpp"
#include "lwrnet/scheme.hpp"
#include "lwrnet/simulation.hpp"
