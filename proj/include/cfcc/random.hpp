#ifndef CFCC_RANDOM_HPP_
#define CFCC_RANDOM_HPP_

#include <cstdint>

namespace cfcc {

inline uint64_t splitmix64(uint64_t &state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream: the generator state is a pure function of
/// (seed, index), so forest i always sees the same bits no matter which
/// worker thread draws it.
class RandomStream {
public:
    RandomStream(uint64_t seed, uint64_t index) {
        uint64_t init = seed ^ (index * 0x9e3779b97f4a7c15ULL) ^ 0x1234567887654321ULL;
        s_[0] = splitmix64(init);
        s_[1] = splitmix64(init);
        s_[2] = splitmix64(init);
        s_[3] = splitmix64(init);
        // xoshiro must not start from the all-zero state
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    // xoshiro256**
    uint64_t next() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Unbiased draw from [0, bound) via bounded rejection (Lemire);
    /// plain modulo would skew the forest distribution.
    uint64_t next_below(uint64_t bound) {
        uint64_t x = next();
        __uint128_t m = (__uint128_t)x * bound;
        uint64_t l = (uint64_t)m;
        if (l < bound) {
            uint64_t t = -bound % bound;
            while (l < t) {
                x = next();
                m = (__uint128_t)x * bound;
                l = (uint64_t)m;
            }
        }
        return (uint64_t)(m >> 64);
    }

    /// +1 or -1 with equal probability.
    int next_sign() { return (next() >> 63) ? 1 : -1; }

    /// Uniform double in [0, 1).
    double next_double() { return (next() >> 11) * 0x1.0p-53; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

/// Derives a sub-seed for a named phase of a run (forest batches,
/// projector entries, probe vectors, ...) so the streams never collide.
inline uint64_t derive_seed(uint64_t master, uint64_t tag) {
    uint64_t s = master ^ (tag * 0xd1342543de82ef95ULL);
    return splitmix64(s);
}

} // namespace cfcc

#endif // CFCC_RANDOM_HPP_
