#pragma once

// Exact scalar fields.  Every container in the library is parametrised by a
// field object F exposing value_type and the arithmetic below.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace ptw {

/// Prime field F_p, values stored as canonical representatives 0..p-1.
struct Fp {
    using value_type = std::uint32_t;
    std::uint32_t p = 2;

    Fp() = default;
    explicit Fp(std::uint32_t prime) : p(prime) {
        if (prime < 2) throw std::invalid_argument("Fp: modulus must be >= 2");
        for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= prime; ++d)
            if (prime % d == 0) throw std::invalid_argument("Fp: modulus is not prime");
    }

    std::uint32_t characteristic() const { return p; }
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(long long v) const {
        long long r = v % static_cast<long long>(p);
        if (r < 0) r += p;
        return static_cast<value_type>(r);
    }
    value_type add(value_type a, value_type b) const {
        std::uint32_t s = a + b;
        return s >= p ? s - p : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p - b; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
    value_type mul(value_type a, value_type b) const {
        return static_cast<value_type>(static_cast<std::uint64_t>(a) * b % p);
    }
    value_type inv(value_type a) const {
        if (a == 0) throw std::domain_error("Fp: inverse of zero");
        long long t = 0, nt = 1, r = p, nr = a;
        while (nr != 0) {
            long long q = r / nr;
            long long tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        return from_int(t);
    }
    value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }
    bool is_zero(value_type a) const { return a == 0; }
    bool eq(value_type a, value_type b) const { return a == b; }
    bool is_one(value_type a) const { return a == 1; }

    /// Symmetric integer representative, used only for display.
    std::string to_string(value_type a) const { return std::to_string(a); }
    value_type parse(const std::string& s) const {
        auto slash = s.find('/');
        if (slash != std::string::npos)
            return div(parse(s.substr(0, slash)), parse(s.substr(slash + 1)));
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("bad scalar '" + s + "'");
        return from_int(v);
    }
    template <class Rng>
    value_type random(Rng& rng) const { return static_cast<value_type>(rng() % p); }
    /// Number of elements, or 0 when infinite.
    std::uint64_t size() const { return p; }
    /// Enumerate the i-th element (0 <= i < size()).
    value_type element(std::uint64_t i) const { return static_cast<value_type>(i % p); }
    bool operator==(const Fp& o) const { return p == o.p; }
};

/// The rationals with arbitrary-precision numerator and denominator.
struct Q {
    using value_type = mpq_class;

    std::uint32_t characteristic() const { return 0; }
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(long long v) const { return mpq_class(static_cast<long>(v)); }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const {
        if (sgn(a) == 0) throw std::domain_error("Q: inverse of zero");
        return 1 / a;
    }
    value_type div(const value_type& a, const value_type& b) const { return a * inv(b); }
    bool is_zero(const value_type& a) const { return sgn(a) == 0; }
    bool eq(const value_type& a, const value_type& b) const { return a == b; }
    bool is_one(const value_type& a) const { return a == 1; }
    std::string to_string(const value_type& a) const { return a.get_str(); }
    value_type parse(const std::string& s) const {
        mpq_class v;
        if (v.set_str(s, 10) != 0) throw std::invalid_argument("bad scalar '" + s + "'");
        if (v.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
        v.canonicalize();
        return v;
    }
    template <class Rng>
    value_type random(Rng& rng) const { return mpq_class(static_cast<long>(rng() % 7) - 3); }
    std::uint64_t size() const { return 0; }
    value_type element(std::uint64_t i) const {
        // 0, 1, -1, 2, -2, ...
        long v = static_cast<long>((i + 1) / 2);
        return mpq_class(i % 2 ? v : -v);
    }
    bool operator==(const Q&) const { return true; }
};

/// Deterministic generator used by every randomised search.  The seed is
/// always explicit; std::mt19937_64 output is fixed by the standard.
using Rng = std::mt19937_64;

}  // namespace ptw
