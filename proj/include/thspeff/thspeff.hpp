// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "capacity.hpp"
#include "csv.hpp"
#include "ensembles.hpp"
#include "error.hpp"
#include "figures.hpp"
#include "laws.hpp"
#include "linalg.hpp"
#include "mixture.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "receivers.hpp"
#include "rng.hpp"
#include "spectra.hpp"
#include "sweep.hpp"
#include "validation.hpp"
