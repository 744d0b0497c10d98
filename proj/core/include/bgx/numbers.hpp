#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgx {

using Int = mpz_class;
using Rat = mpq_class;

// Error taxonomy shared by the CLI exit codes.
enum class errc {
    usage = 2,
    infeasible = 3,
    unsupported_regime = 4,
    trunc_shortfall = 5,
    invalid_input = 6,
};

class bgx_error : public std::runtime_error {
  public:
    bgx_error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw bgx_error(code, what); }

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) fail(errc::invalid_input, "zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

inline Int rat_floor(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline Int rat_ceil(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

// x mod m for rationals, result in [0, m).
inline Rat rat_mod(const Rat& x, const Rat& m) {
    Rat q = x / m;
    Rat r = x - Rat(rat_floor(q)) * m;
    return r;
}

// Largest integer m with m <= sqrt(x); requires x >= 0.
inline Int isqrt_floor(const Int& x) {
    if (x < 0) fail(errc::invalid_input, "isqrt of negative");
    Int r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

// Largest integer m with m^2 * den <= num, i.e. floor(sqrt(num/den)); num >= 0, den > 0.
inline Int isqrt_floor(const Rat& x) {
    if (x < 0) fail(errc::invalid_input, "isqrt of negative");
    Int hint = isqrt_floor(rat_floor(x));
    while (Rat((hint + 1) * (hint + 1)) <= x) ++hint;
    while (Rat(hint * hint) > x) --hint;
    return hint;
}

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int gcd(const std::vector<Int>& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

inline std::string to_string(const Int& x) { return x.get_str(); }

// Canonical fraction rendering: "p" when integral, "p/q" otherwise.
inline std::string to_string(const Rat& x) {
    if (is_integer(x)) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline Rat parse_rat(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) fail(errc::invalid_input, "bad rational: " + s);
    r.canonicalize();
    return r;
}

// FNV-1a over bytes; stable across runs, used for cache keys and checksums.
inline std::uint64_t fnv1a(const std::string& bytes, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hash_hex(const std::string& bytes) {
    std::uint64_t a = fnv1a(bytes);
    std::uint64_t b = fnv1a(bytes, 0x9e3779b97f4a7c15ull);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(a),
                  static_cast<unsigned long long>(b));
    return std::string(buf);
}

}  // namespace bgx
