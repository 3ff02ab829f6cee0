#pragma once

#include "socnet/model.hpp"

#include <cstdint>

namespace socnet {

// Synthetic replicate of a fitted model. Per edge the replicate weight is the
// observed weight whose normal score is nearest s*h + t*eps with eps ~ N(0,1),
// where sigma_b = sigma_hat when it clears the cutoff and the pair MSE
// otherwise. Spurious pairs are resampled i.i.d. with replacement from the
// pair's observed weights. Deterministic given the seed.
WeightedNetwork bootstrap_replicate(const FittedModel& model, std::uint64_t seed);

inline constexpr double kBootstrapSigmaCutoff = 0.01;

}  // namespace socnet
