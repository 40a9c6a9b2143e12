#include "envelope/region.hpp"

#include <algorithm>
#include <stdexcept>

namespace envelope {

bool contains(const HyperRectangle& b, std::span<const double> point) {
    if (point.size() != b.dim())
        throw std::invalid_argument("contains: point dimension mismatch");
    for (std::size_t j = 0; j < b.dim(); ++j)
        if (point[j] < b.lower[j] || point[j] > b.upper[j]) return false;
    return true;
}

bool contains_union(const RegionUnion& r, std::span<const double> point) {
    if (point.size() != r.p)
        throw std::invalid_argument("contains_union: point dimension mismatch");
    for (const auto& b : r.boxes)
        if (contains(b, point)) return true;
    return false;
}

bool pair_disjoint(const HyperRectangle& a, const HyperRectangle& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("pair_disjoint: dimension mismatch");
    for (std::size_t j = 0; j < a.dim(); ++j) {
        double lo = std::max(a.lower[j], b.lower[j]);
        double hi = std::min(a.upper[j], b.upper[j]);
        if (lo > hi) return true;
    }
    return false;
}

bool is_valid_union(const RegionUnion& r) {
    if (r.boxes.empty()) return false;
    for (const auto& b : r.boxes) {
        if (b.dim() != r.p) return false;
        if (!b.well_formed()) return false;
    }
    for (std::size_t i = 0; i + 1 < r.boxes.size(); ++i)
        for (std::size_t j = i + 1; j < r.boxes.size(); ++j)
            if (!pair_disjoint(r.boxes[i], r.boxes[j])) return false;
    return true;
}

std::optional<RegionUnion> decode(const ParamVector& v, std::size_t num_boxes,
                                  std::size_t dims) {
    if (v.size() != 2 * num_boxes * dims)
        throw std::invalid_argument("decode: parameter vector has wrong length");
    RegionUnion r;
    r.p = dims;
    r.boxes.resize(num_boxes);
    for (std::size_t l = 0; l < num_boxes; ++l) {
        auto& box = r.boxes[l];
        box.lower.resize(dims);
        box.upper.resize(dims);
        for (std::size_t j = 0; j < dims; ++j) {
            double lo = v[l * 2 * dims + 2 * j];
            double hi = v[l * 2 * dims + 2 * j + 1];
            if (lo > hi) std::swap(lo, hi);
            if (lo == hi) return std::nullopt; // zero width is not a region
            box.lower[j] = lo;
            box.upper[j] = hi;
        }
    }
    if (!is_valid_union(r)) return std::nullopt;
    return r;
}

ParamVector encode(const RegionUnion& r) {
    ParamVector v(2 * r.boxes.size() * r.p);
    for (std::size_t l = 0; l < r.boxes.size(); ++l) {
        for (std::size_t j = 0; j < r.p; ++j) {
            v[l * 2 * r.p + 2 * j] = r.boxes[l].lower[j];
            v[l * 2 * r.p + 2 * j + 1] = r.boxes[l].upper[j];
        }
    }
    return v;
}

namespace {

bool same_box(const HyperRectangle& a, const HyperRectangle& b) {
    return a.lower == b.lower && a.upper == b.upper;
}

} // namespace

bool same_region(const RegionUnion& a, const RegionUnion& b) {
    if (a.p != b.p || a.boxes.size() != b.boxes.size()) return false;
    std::vector<bool> used(b.boxes.size(), false);
    for (const auto& box : a.boxes) {
        bool found = false;
        for (std::size_t i = 0; i < b.boxes.size(); ++i) {
            if (!used[i] && same_box(box, b.boxes[i])) {
                used[i] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

} // namespace envelope
