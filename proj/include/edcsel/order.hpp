#pragma once

#include <string>
#include <vector>

namespace edcsel {

// A point in the order lattice N^q under the componentwise partial order.
struct OrderIndex {
    std::vector<int> coords;

    OrderIndex() = default;
    explicit OrderIndex(std::vector<int> c) : coords(std::move(c)) {}
    OrderIndex(std::initializer_list<int> c) : coords(c) {}

    int dim() const { return static_cast<int>(coords.size()); }
    int operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }

    bool operator==(const OrderIndex&) const = default;

    std::string str() const;
};

enum class OrderRelation { less_equal, equal, greater, incomparable };

// Componentwise comparison; throws on mismatched lattice dimension.
OrderRelation leq(const OrderIndex& k, const OrderIndex& p);

inline bool lattice_le(const OrderIndex& k, const OrderIndex& p) {
    const auto r = leq(k, p);
    return r == OrderRelation::less_equal || r == OrderRelation::equal;
}

inline bool lattice_lt(const OrderIndex& k, const OrderIndex& p) {
    return leq(k, p) == OrderRelation::less_equal;
}

// Lexicographic order, used for deterministic tie-breaking and listing.
bool lex_less(const OrderIndex& a, const OrderIndex& b);

// All lattice points k <= K in lexicographic order; size prod(K_i + 1).
std::vector<OrderIndex> candidates_up_to(const OrderIndex& K);

} // namespace edcsel
