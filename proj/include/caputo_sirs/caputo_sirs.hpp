#pragma once

#include "caputo_sirs/error.hpp"
#include "caputo_sirs/frac_kernel.hpp"
#include "caputo_sirs/sirs_model.hpp"
#include "caputo_sirs/equilibria.hpp"
#include "caputo_sirs/stability.hpp"
#include "caputo_sirs/sim_engine.hpp"
#include "caputo_sirs/io.hpp"
#include "caputo_sirs/commands.hpp"
