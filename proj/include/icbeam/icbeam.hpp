// SPDX-License-Identifier: Apache-2.0
#pragma once

// Coordinated beamforming on the MIMO interference channel: channel
// generation, per-link best responses, iterative algorithms (statistical
// egoism/altruism balancing, sum-rate pricing, max-SINR, alternating
// leakage minimization), the 2-link MISO Pareto boundary, and a seeded
// Monte Carlo benchmark harness.

#include "icbeam/algorithms.hpp"
#include "icbeam/errors.hpp"
#include "icbeam/experiment.hpp"
#include "icbeam/golden.hpp"
#include "icbeam/metrics.hpp"
#include "icbeam/network.hpp"
#include "icbeam/numerics.hpp"
#include "icbeam/pareto.hpp"
#include "icbeam/rng.hpp"
#include "icbeam/strategies.hpp"
