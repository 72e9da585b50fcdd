#ifndef TRIWIN_RNG_HPP
#define TRIWIN_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace triwin {

// Deterministic RNG built on mt19937_64. Bounded draws and shuffles are
// implemented by hand because the std distributions are not required to
// produce identical streams across standard library implementations.
class rng {
public:
    explicit rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1) with 53-bit resolution
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform index in [0, n), rejection-free enough for our sizes
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    // Fisher-Yates, deterministic for a given seed
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices out of [0, n), in shuffled order
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        shuffle(idx);
        idx.resize(k);
        return idx;
    }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; used to fan a master seed out into independent
// per-(dataset, config, fold) streams in a platform-stable way.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    std::uint64_t h = mix_seed(base);
    for (unsigned char c : tag) h = mix_seed(h ^ c);
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    return mix_seed(mix_seed(base) ^ salt);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::uint64_t a, std::uint64_t b = 0) {
    return derive_seed(derive_seed(derive_seed(base, tag), a), b);
}

} // namespace triwin

#endif
