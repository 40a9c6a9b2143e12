#include "envelope/estimation.hpp"

#include <cmath>
#include <stdexcept>

#include "envelope/rng.hpp"

namespace envelope {

RegionEstimate estimate(const Dataset& d, const RegionUnion& r) {
    if (d.p() != r.p)
        throw std::invalid_argument("estimate: dataset/region dimension mismatch");
    RegionEstimate est;
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        if (contains_union(r, d.row(i))) {
            sum += d.y(i);
            ++count;
        }
    }
    est.inside_count = count;
    est.coverage = static_cast<double>(count) / static_cast<double>(d.n());
    if (count > 0) est.mean = sum / static_cast<double>(count);
    return est;
}

std::optional<double> saa_mean(const Dataset& d, const RegionUnion& r) {
    return estimate(d, r).mean;
}

double coverage(const Dataset& d, const RegionUnion& r) {
    return estimate(d, r).coverage;
}

double bootstrap_sd_members(const std::vector<double>& y,
                            const std::vector<std::uint8_t>& member,
                            const BootstrapConfig& cfg) {
    std::size_t n = y.size();
    std::size_t M = cfg.replicates;
    if (M < 2) throw std::invalid_argument("bootstrap_sd: need at least 2 replicates");
    bool any_member = false;
    for (std::uint8_t m : member)
        if (m) { any_member = true; break; }
    if (!any_member)
        throw std::invalid_argument("bootstrap_sd: region contains no sample");

    std::vector<double> means(M);
    for (std::size_t m = 0; m < M; ++m) {
        bool ok = false;
        for (std::size_t attempt = 0; attempt < 10 && !ok; ++attempt) {
            Rng rng(cfg.seed + m + attempt * M);
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t idx = rng.uniform_index(n);
                if (member[idx]) {
                    sum += y[idx];
                    ++count;
                }
            }
            if (count > 0) {
                means[m] = sum / static_cast<double>(count);
                ok = true;
            }
        }
        if (!ok)
            throw std::runtime_error(
                "bootstrap_sd: replicate repeatedly empty of in-region rows");
    }

    double mean = 0.0;
    for (double v : means) mean += v;
    mean /= static_cast<double>(M);
    double ss = 0.0;
    for (double v : means) {
        double dlt = v - mean;
        ss += dlt * dlt;
    }
    return std::sqrt(ss / static_cast<double>(M - 1));
}

double bootstrap_sd(const Dataset& d, const RegionUnion& r, const BootstrapConfig& cfg) {
    if (d.p() != r.p)
        throw std::invalid_argument("bootstrap_sd: dataset/region dimension mismatch");
    std::vector<std::uint8_t> member(d.n(), 0);
    for (std::size_t i = 0; i < d.n(); ++i)
        member[i] = contains_union(r, d.row(i)) ? 1 : 0;
    return bootstrap_sd_members(d.y_values(), member, cfg);
}

} // namespace envelope
