#pragma once

#include "rabitherm/bath_rates.hpp"
#include "rabitherm/classical_ll.hpp"
#include "rabitherm/errors.hpp"
#include "rabitherm/floquet.hpp"
#include "rabitherm/observables.hpp"
#include "rabitherm/ode.hpp"
#include "rabitherm/oracles.hpp"
#include "rabitherm/spin_algebra.hpp"
#include "rabitherm/steadystate.hpp"
