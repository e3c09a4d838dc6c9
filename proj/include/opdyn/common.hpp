#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace opdyn {

// Dissemination flavor used across modules.
enum class Mode { Iterative, NonIterative };

inline std::string mode_name(Mode m) {
    return m == Mode::Iterative ? "iterative" : "noniterative";
}
inline Mode mode_from_name(const std::string& s) {
    if (s == "iterative") return Mode::Iterative;
    if (s == "noniterative" || s == "non-iterative") return Mode::NonIterative;
    throw std::invalid_argument("unknown mode: " + s);
}

// Raised when a request is structurally impossible (negative block sizes,
// search caps, export caps). Maps to CLI exit code 3.
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Seeding. mt19937_64 output is pinned by the standard; all value mappings
// below are hand-rolled so streams are reproducible across library versions.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stream tags for per-trial seed derivation.
inline constexpr std::uint64_t kStreamGraph = 0x6772617068ULL;
inline constexpr std::uint64_t kStreamAdversary = 0x616476ULL;
inline constexpr std::uint64_t kStreamTie = 0x746965ULL;

// seed = mix(mix(mix(root) ^ trial+1) ^ stream). Documented contract: record
// streams depend only on (root, trial index, stream tag).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t trial, std::uint64_t stream) {
    return splitmix64(splitmix64(splitmix64(root) ^ (trial + 1)) ^ stream);
}

// Thin rng wrapper with fixed value mappings (no std distributions).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // 53-bit uniform in [0,1).
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return u01() < p; }

    bool coin() { return (eng_() & 1ULL) != 0; }

    // Unbiased integer in [0, n).
    std::uint64_t index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::index: n == 0");
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            std::uint64_t r = eng_();
            if (r >= threshold) return r % n;
        }
    }

    // k distinct values from [0, n), in random order (partial Fisher-Yates).
    std::vector<int> sample(int n, int k) {
        if (k < 0 || k > n) throw std::invalid_argument("Rng::sample: k out of range");
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        for (int i = 0; i < k; ++i) {
            int j = i + static_cast<int>(index(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 eng_;
};

// Round half up, the convention used for every block size and degree.
inline long long round_half_up(double x) {
    return static_cast<long long>(std::floor(x + 0.5));
}

// FNV-1a, used for config digests.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace opdyn
