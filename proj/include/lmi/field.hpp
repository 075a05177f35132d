#pragma once

#include <cstdint>
#include <string>

namespace lmi {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Prime-field parameters: the modulus p and the size of the finite
/// subset F = {0, ..., sample_set_size - 1} that random coefficients
/// are drawn from.
struct FieldConfig {
    u64 p = 0;
    u64 sample_set_size = 0;
};

inline u64 add_mod(u64 a, u64 b, u64 p) {
    u64 s = a + b;
    return s >= p ? s - p : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 p) {
    return a >= b ? a - b : a + p - b;
}

inline u64 neg_mod(u64 a, u64 p) {
    return a == 0 ? 0 : p - a;
}

inline u64 mul_mod(u64 a, u64 b, u64 p) {
    return static_cast<u64>(static_cast<u128>(a) * b % p);
}

// Extended Euclid. Throws std::domain_error on a == 0.
u64 inv_mod(u64 a, u64 p);

u64 pow_mod(u64 base, u64 exp, u64 p);

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(u64 n);

// Smallest prime >= max(2^20, n^3), with sample_set_size = min(p, max(16, n^2)).
// Pure function of n.
FieldConfig choose_prime(u64 n);

/// Seeded deterministic random stream. One stream per task; never share a
/// stream across concurrent work. Output does not depend on the platform's
/// std distributions.
class Rng {
public:
    explicit Rng(u64 seed);

    u64 next_u64();

    // Uniform on {0, ..., bound - 1}; bound > 0.
    u64 below(u64 bound);

    // Uniform on the sample set {0, ..., cfg.sample_set_size - 1}, embedded
    // in GF(p). With nonzero set, uniform on the nonzero part.
    u64 field_element(const FieldConfig& cfg, bool nonzero = false);

    // Independent child stream; deterministic in (parent seed, spawn order).
    Rng spawn();

    u64 seed() const { return seed_; }

private:
    u64 state_;
    u64 seed_;
    u64 spawn_count_ = 0;
};

} // namespace lmi
