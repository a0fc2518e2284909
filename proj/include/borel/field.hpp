#pragma once

#include <borel/errors.hpp>

#include <gmpxx.h>

#include <cctype>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace borel {

/*
 * Fields
 *
 * All linear algebra in this library is generic over a *field object* F in
 * the style of exact-arithmetic kernels: elements are plain values
 * (F::value_type) and every operation goes through the field,
 * e.g. f.add(a, b). Two field types are provided:
 *
 *   RationalField  - Q, elements are GMP rationals kept in lowest terms
 *   PrimeField     - F_p, elements are residues in [0, p)
 *
 * FieldSpec is the runtime description used at I/O boundaries; dispatch()
 * turns it into a concrete field object.
 */

class FieldSpec {
public:
    enum class Kind { Rational, Prime };

    static FieldSpec rational() { return FieldSpec(Kind::Rational, 0); }

    /// Throws InvalidInput unless p is a prime below 2^32.
    static FieldSpec prime(std::uint64_t p)
    {
        if (!is_prime(p))
            throw InvalidInput("field modulus " + std::to_string(p) + " is not a prime below 2^32");
        return FieldSpec(Kind::Prime, p);
    }

    /// Parses "q" / "Q" or "fp:<p>".
    static FieldSpec parse(std::string_view text)
    {
        if (text == "q" || text == "Q")
            return rational();
        if (text.size() > 3 && (text.substr(0, 3) == "fp:" || text.substr(0, 3) == "Fp:")) {
            std::string_view digits = text.substr(3);
            std::uint64_t p = 0;
            for (char c : digits) {
                if (!std::isdigit(static_cast<unsigned char>(c)) || p > (std::uint64_t{1} << 40))
                    throw InvalidInput("malformed field '" + std::string(text) + "'");
                p = p * 10 + static_cast<std::uint64_t>(c - '0');
            }
            return prime(p);
        }
        throw InvalidInput("malformed field '" + std::string(text) + "' (expected q or fp:<p>)");
    }

    Kind kind() const { return kind_; }
    bool is_rational() const { return kind_ == Kind::Rational; }
    std::uint64_t modulus() const { return p_; }

    /// "q" or "fp:<p>", the inverse of parse().
    std::string to_string() const { return is_rational() ? "q" : "fp:" + std::to_string(p_); }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

    static bool is_prime(std::uint64_t p)
    {
        if (p < 2 || p >= (std::uint64_t{1} << 32))
            return false;
        for (std::uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0)
                return false;
        return true;
    }

private:
    FieldSpec(Kind kind, std::uint64_t p) : kind_(kind), p_(p) {}

    Kind kind_;
    std::uint64_t p_;
};

template <class F>
concept ExactField = std::copy_constructible<F> && requires(const F& f,
                                                            const typename F::value_type& a,
                                                            long long k,
                                                            const std::string& s) {
    typename F::value_type;
    { f.zero() } -> std::same_as<typename F::value_type>;
    { f.one() } -> std::same_as<typename F::value_type>;
    { f.from_int(k) } -> std::same_as<typename F::value_type>;
    { f.add(a, a) } -> std::same_as<typename F::value_type>;
    { f.sub(a, a) } -> std::same_as<typename F::value_type>;
    { f.mul(a, a) } -> std::same_as<typename F::value_type>;
    { f.neg(a) } -> std::same_as<typename F::value_type>;
    { f.inv(a) } -> std::same_as<typename F::value_type>;
    { f.div(a, a) } -> std::same_as<typename F::value_type>;
    { f.is_zero(a) } -> std::same_as<bool>;
    { f.equal(a, a) } -> std::same_as<bool>;
    { f.to_string(a) } -> std::same_as<std::string>;
    { f.parse(s) } -> std::same_as<typename F::value_type>;
    { f.spec() } -> std::same_as<FieldSpec>;
    { f == f } -> std::same_as<bool>;
};

class RationalField {
public:
    using value_type = mpq_class;

    value_type zero() const { return value_type(0); }
    value_type one() const { return value_type(1); }
    value_type from_int(long long k) const { return value_type(static_cast<long>(k)); }

    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type inv(const value_type& a) const
    {
        if (sgn(a) == 0)
            throw NotInvertible("division by zero in Q");
        return value_type(1) / a;
    }
    value_type div(const value_type& a, const value_type& b) const
    {
        if (sgn(b) == 0)
            throw NotInvertible("division by zero in Q");
        return a / b;
    }

    /// y <- y - a*x, the elimination kernel.
    void sub_mul(value_type& y, const value_type& a, const value_type& x) const { y -= a * x; }

    bool is_zero(const value_type& a) const { return sgn(a) == 0; }
    bool equal(const value_type& a, const value_type& b) const { return a == b; }

    /// "num/den" in lowest terms, "num" when den = 1.
    std::string to_string(const value_type& a) const { return a.get_str(); }

    value_type parse(const std::string& text) const
    {
        const auto slash = text.find('/');
        const std::string num = text.substr(0, slash);
        const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
        if (!is_integer_literal(num) || !is_integer_literal(den))
            throw InvalidInput("malformed rational '" + text + "'");
        mpz_class n(num, 10), d(den, 10);
        if (d == 0)
            throw InvalidInput("zero denominator in '" + text + "'");
        value_type q(n, d);
        q.canonicalize();
        return q;
    }

    FieldSpec spec() const { return FieldSpec::rational(); }

    friend bool operator==(const RationalField&, const RationalField&) { return true; }

private:
    static bool is_integer_literal(const std::string& s)
    {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                return false;
        return true;
    }
};

/// F_p for a prime p < 2^32, so that products fit in 64 bits.
class PrimeField {
public:
    using value_type = std::uint64_t;

    explicit PrimeField(std::uint64_t p) : p_(FieldSpec::prime(p).modulus()) {}

    std::uint64_t modulus() const { return p_; }

    value_type zero() const { return 0; }
    value_type one() const { return 1 % p_; }
    value_type from_int(long long k) const
    {
        const auto m = static_cast<long long>(p_);
        return static_cast<value_type>(((k % m) + m) % m);
    }

    value_type add(value_type a, value_type b) const
    {
        const value_type s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
    value_type mul(value_type a, value_type b) const { return (a * b) % p_; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }

    value_type inv(value_type a) const
    {
        if (a == 0)
            throw NotInvertible("division by zero in F_" + std::to_string(p_));
        // extended Euclid on (a, p)
        long long r0 = static_cast<long long>(p_), r1 = static_cast<long long>(a);
        long long t0 = 0, t1 = 1;
        while (r1 != 0) {
            const long long q = r0 / r1;
            r0 = std::exchange(r1, r0 - q * r1);
            t0 = std::exchange(t1, t0 - q * t1);
        }
        return from_int(t0);
    }
    value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

    void sub_mul(value_type& y, value_type a, value_type x) const { y = sub(y, mul(a, x)); }

    bool is_zero(value_type a) const { return a == 0; }
    bool equal(value_type a, value_type b) const { return a == b; }

    std::string to_string(value_type a) const { return std::to_string(a); }

    /// Accepts a decimal residue in [0, p).
    value_type parse(const std::string& text) const
    {
        if (text.empty() || text.size() > 20)
            throw InvalidInput("malformed residue '" + text + "'");
        value_type v = 0;
        for (char c : text) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw InvalidInput("malformed residue '" + text + "'");
            v = v * 10 + static_cast<value_type>(c - '0');
            if (v >= p_)
                throw InvalidInput("residue '" + text + "' outside [0, " + std::to_string(p_) + ")");
        }
        return v;
    }

    FieldSpec spec() const { return FieldSpec::prime(p_); }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint64_t p_;
};

static_assert(ExactField<RationalField>);
static_assert(ExactField<PrimeField>);

/// Calls fn with the concrete field object described by spec.
template <class Fn>
decltype(auto) dispatch(const FieldSpec& spec, Fn&& fn)
{
    if (spec.is_rational())
        return std::forward<Fn>(fn)(RationalField{});
    return std::forward<Fn>(fn)(PrimeField{spec.modulus()});
}

template <ExactField F>
void require_same_field(const F& a, const F& b)
{
    if (!(a == b))
        throw FieldMismatch("operands over different fields: " + a.spec().to_string() + " vs " +
                            b.spec().to_string());
}

} // namespace borel
