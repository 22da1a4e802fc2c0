#pragma once

// Everything except the command-line layer, which needs the vendored headers.

#include "bessel.hpp"
#include "coefficients.hpp"
#include "field.hpp"
#include "gamma.hpp"
#include "kernels.hpp"
#include "lfunction.hpp"
#include "modular.hpp"
#include "numeric.hpp"
#include "riesz.hpp"
#include "zeta.hpp"
