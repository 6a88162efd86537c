#pragma once

#include <span>

#include "spinperc/exact.hpp"
#include "spinperc/model.hpp"
#include "spinperc/types.hpp"

namespace spinperc {

// Unbiased estimator of I2(X_u; X_v | Y): draw (X, Y) from the model with
// X gauge-fixed, compute the inner posterior mean exactly, and average its
// square. The standard error comes from the unbiased sample variance of the
// squared posterior mean.
InfoResult mc_pairwise_chi2(const SyncModel& m, int u, int v, const McConfig& cfg,
                            const Budget& budget = {});

// Set version via the virtual-vertex construction; a singleton set reduces
// to the pairwise estimator.
InfoResult mc_set_chi2(const SyncModel& m, int u, std::span<const int> s, const McConfig& cfg,
                       const Budget& budget = {});

} // namespace spinperc
