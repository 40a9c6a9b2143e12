#include "envelope/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "envelope/rng.hpp"

namespace envelope {

Dataset::Dataset(std::vector<double> y, std::vector<double> x_rowmajor,
                 std::vector<std::string> feature_names, std::string response_name)
    : y_(std::move(y)),
      x_(std::move(x_rowmajor)),
      feature_names_(std::move(feature_names)),
      response_name_(std::move(response_name)) {
    n_ = y_.size();
    p_ = feature_names_.size();
    if (n_ < 1) throw std::invalid_argument("Dataset: need at least one row");
    if (p_ < 1) throw std::invalid_argument("Dataset: need at least one feature");
    if (x_.size() != n_ * p_)
        throw std::invalid_argument("Dataset: x size does not match n*p");
    for (double v : y_)
        if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite response value");
    for (double v : x_)
        if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite feature value");
    auto [mn, mx] = std::minmax_element(y_.begin(), y_.end());
    y_min_ = *mn;
    y_max_ = *mx;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    std::vector<double> y;
    std::vector<double> x;
    y.reserve(rows.size());
    x.reserve(rows.size() * p_);
    for (std::size_t r : rows) {
        if (r >= n_) throw std::out_of_range("Dataset::subset: row index out of range");
        y.push_back(y_[r]);
        x.insert(x.end(), x_.begin() + r * p_, x_.begin() + (r + 1) * p_);
    }
    return Dataset(std::move(y), std::move(x), feature_names_, response_name_);
}

DomainBounds DomainBounds::from_data(const Dataset& d, double padding) {
    DomainBounds b;
    std::size_t p = d.p();
    b.lower.assign(p, 0.0);
    b.upper.assign(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        double mn = d.row(0)[j];
        double mx = mn;
        for (std::size_t i = 1; i < d.n(); ++i) {
            double v = d.row(i)[j];
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        double range = mx - mn;
        double pad = range > 0.0 ? padding * range : 0.5;
        b.lower[j] = mn - pad;
        b.upper[j] = mx + pad;
    }
    return b;
}

std::vector<std::size_t> FoldAssignment::rows_in_fold(int fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == fold) rows.push_back(i);
    return rows;
}

std::vector<std::size_t> FoldAssignment::rows_not_in_fold(int fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] != fold) rows.push_back(i);
    return rows;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no, const std::string& column) {
    const char* s = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    while (end && *end == ' ') ++end;
    bool consumed = end && *end == '\0' && end != s && !cell.empty();
    if (!consumed || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "CSV line " << line_no << ", column '" << column << "': cannot parse '"
            << cell << "' as a finite real";
        throw std::runtime_error(msg.str());
    }
    return v;
}

} // namespace

Dataset load_csv(const std::string& path, const std::string& response_column,
                 const std::vector<std::string>& feature_columns) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty file: " + path);
    std::vector<std::string> names = split_line(header);

    auto find_column = [&](const std::string& name) {
        std::size_t idx = names.size();
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) {
                if (idx != names.size())
                    throw std::runtime_error("ambiguous column '" + name + "' in " + path);
                idx = i;
            }
        }
        if (idx == names.size())
            throw std::runtime_error("missing column '" + name + "' in " + path);
        return idx;
    };

    std::size_t y_idx = find_column(response_column);
    std::vector<std::size_t> x_idx;
    x_idx.reserve(feature_columns.size());
    for (const auto& name : feature_columns) x_idx.push_back(find_column(name));

    std::vector<double> y;
    std::vector<double> x;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != names.size()) {
            std::ostringstream msg;
            msg << "CSV line " << line_no << ": expected " << names.size()
                << " cells, got " << cells.size();
            throw std::runtime_error(msg.str());
        }
        y.push_back(parse_cell(cells[y_idx], line_no, response_column));
        for (std::size_t j = 0; j < x_idx.size(); ++j)
            x.push_back(parse_cell(cells[x_idx[j]], line_no, feature_columns[j]));
    }
    if (y.empty()) throw std::runtime_error("no data rows in " + path);
    return Dataset(std::move(y), std::move(x), feature_columns, response_column);
}

void write_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << d.response_name();
    for (const auto& name : d.feature_names()) out << ',' << name;
    out << '\n';
    char buf[40];
    for (std::size_t i = 0; i < d.n(); ++i) {
        // %.17g round-trips every double exactly.
        std::snprintf(buf, sizeof buf, "%.17g", d.y(i));
        out << buf;
        for (double v : d.row(i)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    // Fisher-Yates with the library RNG; fixed algorithm, reproducible.
    for (std::size_t i = n; i > 1; --i) {
        std::size_t j = rng.uniform_index(i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

} // namespace

std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction,
                                  std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: train_fraction must be in (0,1)");
    std::size_t n = d.n();
    std::size_t train_count =
        static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (train_count == 0 || train_count >= n)
        throw std::invalid_argument("split: both parts must be nonempty");
    std::vector<std::size_t> idx = shuffled_indices(n, seed);
    std::vector<std::size_t> train_rows(idx.begin(), idx.begin() + train_count);
    std::vector<std::size_t> test_rows(idx.begin() + train_count, idx.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {d.subset(train_rows), d.subset(test_rows)};
}

FoldAssignment kfold(const Dataset& d, int k, std::uint64_t seed) {
    if (k < 2 || static_cast<std::size_t>(k) > d.n())
        throw std::invalid_argument("kfold: k out of range [2, n]");
    std::vector<std::size_t> idx = shuffled_indices(d.n(), seed);
    FoldAssignment fa;
    fa.k = k;
    fa.assignment.assign(d.n(), 0);
    for (std::size_t pos = 0; pos < idx.size(); ++pos)
        fa.assignment[idx[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
    return fa;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = rng.uniform_index(n);
    return idx;
}

Dataset bootstrap_resample(const Dataset& d, std::uint64_t seed) {
    return d.subset(bootstrap_indices(d.n(), seed));
}

} // namespace envelope
