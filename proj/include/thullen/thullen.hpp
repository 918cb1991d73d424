#pragma once

#include "basis.hpp"
#include "domain.hpp"
#include "error.hpp"
#include "io.hpp"
#include "kernel.hpp"
#include "maps.hpp"
#include "metric.hpp"
#include "operators.hpp"
#include "quadrature.hpp"
