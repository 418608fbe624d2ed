#pragma once

#include "spinchain/analytic.hpp"
#include "spinchain/dynamics.hpp"
#include "spinchain/hamiltonian.hpp"
#include "spinchain/io.hpp"
#include "spinchain/scenario.hpp"
#include "spinchain/spectral.hpp"
#include "spinchain/spectro.hpp"
#include "spinchain/spin_ops.hpp"
