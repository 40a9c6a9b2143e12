#ifndef ENVELOPE_ESTIMATION_HPP
#define ENVELOPE_ESTIMATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "envelope/dataset.hpp"
#include "envelope/region.hpp"

namespace envelope {

/**
 * Model-free estimates for one region: the in-region response mean, the
 * sample-proportion coverage, and the raw inside count. The mean is empty
 * exactly when no sample falls inside the region.
 */
struct RegionEstimate {
    std::optional<double> mean;
    double coverage = 0.0;
    std::size_t inside_count = 0;
};

struct BootstrapConfig {
    std::size_t replicates = 500; // M
    std::uint64_t seed = 0;
};

// Indicator-weighted response mean over the dataset; empty when the region
// holds no sample. Cost is one O(n*L*p) scan.
std::optional<double> saa_mean(const Dataset& d, const RegionUnion& r);

// Fraction of rows inside the region, in [0,1]; coverage*n is integral.
double coverage(const Dataset& d, const RegionUnion& r);

// Mean, coverage and count in a single scan; agrees with saa_mean and
// coverage exactly (same accumulation order). This is the optimizer's hot
// loop: O(n*L*p) per call with per-row short-circuit membership testing.
RegionEstimate estimate(const Dataset& d, const RegionUnion& r);

/**
 * Bootstrap standard deviation of the in-region mean estimate.
 *
 * Replicate m resamples n rows with replacement using seed+m (identical to
 * bootstrap_resample(d, seed+m)) and recomputes the in-region mean; the
 * result is the 1/(M-1) sample SD over the M replicate means, reduced in
 * replicate order so it is independent of any execution parallelism.
 *
 * A replicate whose resample has zero in-region rows is redrawn with seeds
 * seed+m+a*M for a = 1..9; dropping such replicates would bias M, and the
 * replicate mean is undefined there. After 10 failed attempts the whole
 * computation fails. Errors: region empty on d itself, or M < 2.
 */
double bootstrap_sd(const Dataset& d, const RegionUnion& r, const BootstrapConfig& cfg);

// Same computation given a precomputed membership mask over rows (the form
// used inside fitness evaluation, where membership is already known).
double bootstrap_sd_members(const std::vector<double>& y,
                            const std::vector<std::uint8_t>& member,
                            const BootstrapConfig& cfg);

} // namespace envelope

#endif // ENVELOPE_ESTIMATION_HPP
