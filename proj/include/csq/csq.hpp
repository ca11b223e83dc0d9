// Umbrella header for the whole library.
#pragma once

#include "csq/fock.hpp"
#include "csq/quadrature.hpp"
#include "csq/coherent.hpp"
#include "csq/projector.hpp"
#include "csq/spin.hpp"
#include "csq/classical.hpp"
#include "csq/correlators.hpp"
#include "csq/wiener.hpp"
#include "csq/experiments.hpp"
