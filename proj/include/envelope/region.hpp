#ifndef ENVELOPE_REGION_HPP
#define ENVELOPE_REGION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace envelope {

// Closed axis-aligned box: lower[j] <= point[j] <= upper[j] on every axis.
// Well-formed boxes have lower[j] < upper[j] strictly.
struct HyperRectangle {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const { return lower.size(); }

    bool well_formed() const {
        if (lower.size() != upper.size() || lower.empty()) return false;
        for (std::size_t j = 0; j < lower.size(); ++j)
            if (!(lower[j] < upper[j])) return false;
        return true;
    }

    double width(std::size_t j) const { return upper[j] - lower[j]; }

    std::vector<double> center() const {
        std::vector<double> c(lower.size());
        for (std::size_t j = 0; j < lower.size(); ++j) c[j] = 0.5 * (lower[j] + upper[j]);
        return c;
    }
};

// Union of pairwise-disjoint boxes sharing one dimension p. Box order is not
// semantically meaningful; unions compare equal as sets of boxes.
struct RegionUnion {
    std::vector<HyperRectangle> boxes;
    std::size_t p = 0;
};

// Flat parameter layout searched by the optimizer: for box l and dimension j
// in lexicographic (l, j) order, the pair (low, high) sits at
// [l*2p + 2j, l*2p + 2j + 1]. Length is exactly 2*p*L.
using ParamVector = std::vector<double>;

bool contains(const HyperRectangle& b, std::span<const double> point);
bool contains_union(const RegionUnion& r, std::span<const double> point);

// Disjointness test: some axis j has max(lower_a[j], lower_b[j]) strictly
// greater than min(upper_a[j], upper_b[j]). Boxes sharing only a face are
// NOT disjoint under this test.
bool pair_disjoint(const HyperRectangle& a, const HyperRectangle& b);

// All boxes well-formed and all pairs disjoint.
bool is_valid_union(const RegionUnion& r);

// Reads 2*p*L reals into a union. A coordinate pair with low > high is
// swapped (canonicalization); low == high marks the candidate invalid, as
// does any disjointness violation. Never throws on content, only on length,
// so the optimizer can map invalid candidates to a sentinel fitness.
std::optional<RegionUnion> decode(const ParamVector& v, std::size_t num_boxes,
                                  std::size_t dims);

// Inverse of decode on valid unions: decode(encode(r), L, p) == r.
ParamVector encode(const RegionUnion& r);

// Set-equality of box lists (exact coordinate comparison).
bool same_region(const RegionUnion& a, const RegionUnion& b);

} // namespace envelope

#endif // ENVELOPE_REGION_HPP
