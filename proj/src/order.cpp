#include "edcsel/order.hpp"

#include <sstream>
#include <stdexcept>

namespace edcsel {

std::string OrderIndex::str() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords.size(); ++i) os << coords[i] << (i + 1 < coords.size() ? "," : "");
    os << ")";
    return os.str();
}

OrderRelation leq(const OrderIndex& k, const OrderIndex& p) {
    if (k.dim() != p.dim()) throw std::invalid_argument("leq: lattice dimensions differ");
    bool some_less = false, some_greater = false;
    for (int i = 0; i < k.dim(); ++i) {
        if (k[i] < p[i]) some_less = true;
        if (k[i] > p[i]) some_greater = true;
    }
    if (some_less && some_greater) return OrderRelation::incomparable;
    if (some_less) return OrderRelation::less_equal;
    if (some_greater) return OrderRelation::greater;
    return OrderRelation::equal;
}

bool lex_less(const OrderIndex& a, const OrderIndex& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("lex_less: lattice dimensions differ");
    for (int i = 0; i < a.dim(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

std::vector<OrderIndex> candidates_up_to(const OrderIndex& K) {
    for (int i = 0; i < K.dim(); ++i)
        if (K[i] < 0) throw std::invalid_argument("candidates_up_to: negative bound");
    std::vector<OrderIndex> out;
    OrderIndex cur;
    cur.coords.assign(K.coords.size(), 0);
    while (true) {
        out.push_back(cur);
        // lexicographic increment with per-coordinate carry
        int i = cur.dim() - 1;
        while (i >= 0) {
            if (cur.coords[static_cast<std::size_t>(i)] < K[i]) {
                ++cur.coords[static_cast<std::size_t>(i)];
                break;
            }
            cur.coords[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
    }
    return out;
}

} // namespace edcsel
