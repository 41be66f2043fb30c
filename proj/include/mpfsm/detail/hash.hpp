#ifndef MPFSM_DETAIL_HASH_HPP
#define MPFSM_DETAIL_HASH_HPP

#include <cstddef>
#include <vector>

namespace mpfsm::detail {

/// FNV-1a over int sequences; used to key search sets by flattened encodings.
struct VecIntHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

} // namespace mpfsm::detail

#endif
