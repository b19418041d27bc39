#pragma once

#include "dslab/attractor.hpp"
#include "dslab/config.hpp"
#include "dslab/ds_solver.hpp"
#include "dslab/energy.hpp"
#include "dslab/errors.hpp"
#include "dslab/multiplier_norm.hpp"
#include "dslab/parallel.hpp"
#include "dslab/smoothing.hpp"
#include "dslab/spectral_core.hpp"
#include "dslab/stats.hpp"
#include "dslab/xsb.hpp"
