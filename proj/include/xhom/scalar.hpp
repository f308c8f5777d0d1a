#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace xhom {

// Exact scalars. The whole library is templated on the scalar type; the two
// models are Fp (prime field, runtime modulus shared by the process) and Rat
// (arbitrary-precision rationals on top of GMP). Both expose the same
// interface: from_int / from_fraction, +, -, *, /, inv, is_zero, str.

class Fp {
public:
    Fp() : v_(0) {}

    static void set_modulus(std::uint64_t p) {
        if (p < 2 || p >= (1ull << 31))
            throw std::invalid_argument("Fp: modulus out of range");
        for (std::uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0)
                throw std::invalid_argument("Fp: modulus " + std::to_string(p) + " is not prime");
        modulus_ = p;
    }

    static std::uint64_t modulus() { return modulus_; }

    static Fp from_int(long long n) {
        long long m = n % static_cast<long long>(modulus_);
        if (m < 0) m += static_cast<long long>(modulus_);
        Fp x;
        x.v_ = static_cast<std::uint64_t>(m);
        return x;
    }

    static Fp from_fraction(long long num, long long den) {
        return from_int(num) / from_int(den);
    }

    static Fp zero() { return Fp(); }
    static Fp one() { return from_int(1); }

    bool is_zero() const { return v_ == 0; }

    Fp operator+(const Fp& o) const { return raw((v_ + o.v_) % modulus_); }
    Fp operator-(const Fp& o) const { return raw((v_ + modulus_ - o.v_) % modulus_); }
    Fp operator-() const { return raw(v_ == 0 ? 0 : modulus_ - v_); }
    Fp operator*(const Fp& o) const { return raw((v_ * o.v_) % modulus_); }
    Fp operator/(const Fp& o) const { return *this * o.inv(); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    Fp& operator/=(const Fp& o) { return *this = *this / o; }

    bool operator==(const Fp& o) const { return v_ == o.v_; }
    bool operator!=(const Fp& o) const { return v_ != o.v_; }

    // Extended Euclid; division by zero is a logic error upstream.
    Fp inv() const {
        if (v_ == 0) throw std::domain_error("Fp: division by zero");
        long long p = static_cast<long long>(modulus_);
        long long a = static_cast<long long>(v_), b = p, x0 = 1, x1 = 0;
        while (b != 0) {
            long long q = a / b;
            long long t = a - q * b; a = b; b = t;
            t = x0 - q * x1; x0 = x1; x1 = t;
        }
        x0 %= p;
        if (x0 < 0) x0 += p;
        return raw(static_cast<std::uint64_t>(x0));
    }

    std::string str() const { return std::to_string(v_); }

    std::uint64_t residue() const { return v_; }

private:
    static Fp raw(std::uint64_t v) { Fp x; x.v_ = v; return x; }
    std::uint64_t v_;
    inline static std::uint64_t modulus_ = 101;
};

class Rat {
public:
    Rat() : q_(0) {}
    explicit Rat(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    static Rat from_int(long long n) { return Rat(mpq_class(static_cast<long>(n))); }

    static Rat from_fraction(long long num, long long den) {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        mpq_class q(static_cast<long>(num), static_cast<long>(den));
        q.canonicalize();
        return Rat(q);
    }

    static Rat zero() { return Rat(); }
    static Rat one() { return from_int(1); }

    bool is_zero() const { return q_ == 0; }

    Rat operator+(const Rat& o) const { return Rat(mpq_class(q_ + o.q_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(q_ - o.q_)); }
    Rat operator-() const { return Rat(mpq_class(-q_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(q_ * o.q_)); }

    Rat operator/(const Rat& o) const {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        return Rat(mpq_class(q_ / o.q_));
    }

    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    bool operator==(const Rat& o) const { return q_ == o.q_; }
    bool operator!=(const Rat& o) const { return q_ != o.q_; }

    Rat inv() const {
        if (is_zero()) throw std::domain_error("Rat: division by zero");
        return Rat(mpq_class(1 / q_));
    }

    std::string str() const { return q_.get_str(); }

private:
    mpq_class q_;
};

// (-1)^e as a scalar; the signs in the complexes all funnel through here.
template <class F>
F sign_pow(long long e) {
    return (e % 2 == 0) ? F::one() : -F::one();
}

} // namespace xhom
