#include "lmi/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace lmi {

u64 inv_mod(u64 a, u64 p) {
    a %= p;
    if (a == 0)
        throw std::domain_error("inv_mod: zero has no inverse");
    // Iterative extended Euclid; Bezout coefficient of a tracked mod p,
    // maintaining r == t * a (mod p) throughout.
    u64 t = 0, new_t = 1;
    u64 r = p, new_r = a;
    while (new_r != 0) {
        u64 q = r / new_r;
        u64 next_t = sub_mod(t, mul_mod(q % p, new_t, p), p);
        t = new_t;
        new_t = next_t;
        u64 next_r = r - q * new_r;
        r = new_r;
        new_r = next_r;
    }
    // r == gcd(a, p) == 1 since p is prime.
    return t;
}

u64 pow_mod(u64 base, u64 exp, u64 p) {
    u64 result = 1 % p;
    base %= p;
    while (exp > 0) {
        if (exp & 1)
            result = mul_mod(result, base, p);
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 n) {
    if (n < 2)
        return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0)
            return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This witness set is deterministic for all n < 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

FieldConfig choose_prime(u64 n) {
    if (n < 1)
        throw std::invalid_argument("choose_prime: n must be >= 1");
    u64 lower = u64{1} << 20;
    u64 cube = n * n * n;
    u64 p = std::max(lower, cube);
    while (!is_prime(p))
        ++p;
    u64 square = n * n;
    u64 sample = std::min(p, std::max<u64>(16, square));
    return FieldConfig{p, sample};
}

namespace {

// splitmix64; used both for seeding and as the stream generator so that
// output is identical across standard libraries.
u64 splitmix64(u64& state) {
    u64 z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(u64 seed) : state_(seed), seed_(seed) {
    // Warm up so that small seeds do not produce small first outputs.
    splitmix64(state_);
}

u64 Rng::next_u64() {
    return splitmix64(state_);
}

u64 Rng::below(u64 bound) {
    if (bound == 0)
        throw std::invalid_argument("Rng::below: bound must be positive");
    // Rejection sampling to keep the distribution exactly uniform.
    u64 threshold = (0 - bound) % bound;
    for (;;) {
        u64 r = next_u64();
        if (r >= threshold)
            return r % bound;
    }
}

u64 Rng::field_element(const FieldConfig& cfg, bool nonzero) {
    if (nonzero)
        return 1 + below(cfg.sample_set_size - 1);
    return below(cfg.sample_set_size);
}

Rng Rng::spawn() {
    u64 child_seed = seed_ ^ (0xd1342543de82ef95ull * ++spawn_count_);
    splitmix64(child_seed);
    return Rng(child_seed ^ next_u64());
}

} // namespace lmi
