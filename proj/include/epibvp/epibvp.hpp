#pragma once

#include "epibvp/adm.hpp"
#include "epibvp/errors.hpp"
#include "epibvp/greens.hpp"
#include "epibvp/lambda_scan.hpp"
#include "epibvp/monotone.hpp"
#include "epibvp/power_series.hpp"
#include "epibvp/problem.hpp"
#include "epibvp/quadrature.hpp"
#include "epibvp/radial.hpp"
