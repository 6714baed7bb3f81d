#pragma once

#include <cstdint>
#include <string>

namespace fsbench {

// Schedule-independent seed derivation: every task mixes the run seed with
// its identifying strings/ordinals so results do not depend on which worker
// picks the task up.
struct SeedMixer {
    std::uint64_t state;

    explicit SeedMixer(std::uint64_t base) : state(base ^ 0x9e3779b97f4a7c15ULL) { mix(); }

    SeedMixer& with(const std::string& part) {
        for (unsigned char ch : part) {
            state ^= ch;
            state *= 1099511628211ULL;
        }
        mix();
        return *this;
    }

    SeedMixer& with(std::uint64_t part) {
        state ^= part + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
        mix();
        return *this;
    }

    std::uint64_t value() const { return state; }

private:
    void mix() {
        // splitmix64 finalizer
        std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        state = z ^ (z >> 31);
    }
};

inline std::uint64_t derive_seed(std::uint64_t base, const std::string& a) {
    return SeedMixer(base).with(a).value();
}

inline std::uint64_t derive_seed(std::uint64_t base, const std::string& a, const std::string& b) {
    return SeedMixer(base).with(a).with(b).value();
}

inline std::uint64_t derive_seed(std::uint64_t base, const std::string& a, std::uint64_t b) {
    return SeedMixer(base).with(a).with(b).value();
}

inline std::uint64_t derive_seed(std::uint64_t base, const std::string& a, const std::string& b,
                                 std::uint64_t c) {
    return SeedMixer(base).with(a).with(b).with(c).value();
}

} // namespace fsbench
