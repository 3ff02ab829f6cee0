#pragma once

#include <cstdint>
#include <string_view>

namespace socnet {

// Counter-mode generator built on the splitmix64 finalizer. A stream is a
// 64-bit key plus a running counter; fork() derives an independent child key
// from a tag string and an index. Draws therefore depend only on
// (key, counter), never on evaluation order across substreams, which keeps
// generation and bootstrap output stable under parallel scheduling.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key = 0) : key_(key) {}

    std::uint64_t next_u64() {
        return mix(key_ + kGamma * ++counter_);
    }

    // strictly inside (0,1): 53 random bits centered on half-ulp offsets
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double normal();  // inverse-CDF transform, defined in special.cpp

    // unbiased integer in [0, n)
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r = next_u64();
        while (r >= limit) r = next_u64();
        return r % n;
    }

    CounterRng fork(std::string_view tag, std::uint64_t index) const {
        std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the tag
        for (char c : tag) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return CounterRng(mix(mix(key_ ^ h) + kGamma * (index + 1)));
    }

    std::uint64_t key() const { return key_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace socnet
