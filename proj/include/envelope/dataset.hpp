#ifndef ENVELOPE_DATASET_HPP
#define ENVELOPE_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace envelope {

/**
 * Immutable table of n paired samples (y_i, x_i) with x_i in R^p.
 *
 * Rows are stored row-major. Construction validates that every referenced
 * value is finite and that dimensions agree; afterwards the data never
 * changes, so a Dataset may be read concurrently from any number of threads.
 */
class Dataset {
public:
    Dataset(std::vector<double> y, std::vector<double> x_rowmajor,
            std::vector<std::string> feature_names,
            std::string response_name = "y");

    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }

    double y(std::size_t i) const { return y_[i]; }
    std::span<const double> row(std::size_t i) const {
        return {x_.data() + i * p_, p_};
    }

    const std::vector<double>& y_values() const { return y_; }
    const std::vector<double>& x_values() const { return x_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::string& response_name() const { return response_name_; }

    double y_min() const { return y_min_; }
    double y_max() const { return y_max_; }

    // New Dataset holding the given rows (in the given order).
    Dataset subset(std::span<const std::size_t> rows) const;

private:
    std::vector<double> y_;
    std::vector<double> x_;
    std::vector<std::string> feature_names_;
    std::string response_name_;
    std::size_t n_ = 0;
    std::size_t p_ = 0;
    double y_min_ = 0.0;
    double y_max_ = 0.0;
};

/**
 * Per-dimension search box for the optimizer, strictly containing the data.
 *
 * Defaults to the observed min/max padded by `padding` times the observed
 * range on each side, so box edges strictly outside all points are reachable
 * and full coverage is attainable. A constant dimension (zero range) is
 * padded by 0.5 on each side to keep lower < upper.
 */
struct DomainBounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const { return lower.size(); }
    double width(std::size_t j) const { return upper[j] - lower[j]; }

    static DomainBounds from_data(const Dataset& d, double padding = 0.01);
};

struct FoldAssignment {
    int k = 0;
    std::vector<int> assignment; // n entries in [0, k)

    std::vector<std::size_t> rows_in_fold(int fold) const;
    std::vector<std::size_t> rows_not_in_fold(int fold) const;
};

// Loads a CSV file (header line, comma separators, decimal-point reals).
// Any missing or non-finite value in a referenced column aborts the load
// with an error naming the offending line and column; rows are never
// silently dropped, since estimates downstream are proportions of n.
Dataset load_csv(const std::string& path, const std::string& response_column,
                 const std::vector<std::string>& feature_columns);

// Writes a Dataset back to CSV with round-trip-exact number formatting.
void write_csv(const Dataset& d, const std::string& path);

// Seeded random split into (train, test) by a SplitMix64-shuffled
// permutation; deterministic across platforms for a fixed seed.
std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction,
                                  std::uint64_t seed);

// Seeded k-fold assignment; fold sizes differ by at most one.
FoldAssignment kfold(const Dataset& d, int k, std::uint64_t seed);

// n rows drawn i.i.d. uniformly with replacement; deterministic per seed.
Dataset bootstrap_resample(const Dataset& d, std::uint64_t seed);

// Index draws behind bootstrap_resample, shared with the bootstrap SD
// estimator so both resample identically for the same seed.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

} // namespace envelope

#endif // ENVELOPE_DATASET_HPP
