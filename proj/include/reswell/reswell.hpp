#pragma once

#include "core.hpp"
#include "bound_states.hpp"
#include "resonances.hpp"
#include "exceptional.hpp"
#include "scattering.hpp"
#include "well1d.hpp"
#include "pt_algebra.hpp"
#include "pu_oscillator.hpp"
#include "verify.hpp"
