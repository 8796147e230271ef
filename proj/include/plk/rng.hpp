#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace plk {

/// Independent random stream derived from a master seed and a tuple of
/// counters (e.g. {seed index, purpose, n}). Streams depend only on these
/// integers, never on thread count or call order.
inline std::mt19937_64 make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * ids.size());
    words.push_back(static_cast<std::uint32_t>(master));
    words.push_back(static_cast<std::uint32_t>(master >> 32));
    for (std::uint64_t id : ids) {
        words.push_back(static_cast<std::uint32_t>(id));
        words.push_back(static_cast<std::uint32_t>(id >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace plk
