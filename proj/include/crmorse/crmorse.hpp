#pragma once

// Umbrella header.

#include "crmorse/convergence.hpp"
#include "crmorse/errors.hpp"
#include "crmorse/hermitian.hpp"
#include "crmorse/model_kernel.hpp"
#include "crmorse/morse.hpp"
#include "crmorse/oracles.hpp"
#include "crmorse/parallel.hpp"
#include "crmorse/pencil.hpp"
#include "crmorse/polynomial.hpp"
#include "crmorse/quadrature.hpp"
#include "crmorse/rational.hpp"
