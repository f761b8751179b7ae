#include "nippaudit/arith.hpp"

#include <cctype>
#include <ostream>
#include <string>

namespace nippaudit {

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(long long value) : value_(static_cast<long>(value)) {
    static_assert(sizeof(long) == sizeof(long long), "LP64 platform expected");
}

Rational::Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    value_ /= o.value_;
    return *this;
}

Rational Rational::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [](std::string_view s) {
        if (s.empty()) throw DomainError("empty integer");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw DomainError("malformed integer '" + std::string(s) + "'");
        for (std::size_t k = i; k < s.size(); ++k)
            if (!std::isdigit(static_cast<unsigned char>(s[k])))
                throw DomainError("malformed integer '" + std::string(s) + "'");
        std::string digits(s[0] == '+' ? s.substr(1) : s);
        return Integer(digits, 10);
    };
    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const Integer den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0) throw DomainError("rational with zero denominator");
    return Rational(parse_int(trim(text.substr(0, slash))), den);
}

std::string Rational::to_string() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational pow(const Rational& base, int exponent) {
    if (exponent < 0) return Rational(1) / pow(base, -exponent);
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.num().get_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), base.den().get_mpz_t(), static_cast<unsigned long>(exponent));
    return Rational(num, den);
}

// ---------------------------------------------------------------------------
// Primes and valuations

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

static void require_prime(long p) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
}

std::vector<long> prime_divisors(Integer n) {
    if (n == 0) throw DomainError("prime divisors of zero");
    if (n < 0) n = -n;
    std::vector<long> out;
    for (long d = 2; Integer(d) * d <= n; ++d) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d))) {
            out.push_back(d);
            while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(d))) n /= d;
        }
    }
    if (n > 1) {
        if (!n.fits_slong_p()) throw DomainError("prime factor too large");
        out.push_back(n.get_si());
    }
    return out;
}

std::vector<long> bad_primes(const Integer& n) {
    std::vector<long> out = prime_divisors(n);
    if (out.empty() || out.front() != 2) out.insert(out.begin(), 2);
    return out;
}

int valuation(const Integer& x, long p) {
    require_prime(p);
    if (x == 0) throw DomainError("valuation of zero");
    Integer rest = x;
    return static_cast<int>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), Integer(p).get_mpz_t()));
}

int valuation(const Rational& x, long p) {
    if (x.is_zero()) throw DomainError("valuation of zero");
    return valuation(x.num(), p) - valuation(x.den(), p);
}

Rational unit_part(const Rational& x, long p) {
    const int v = valuation(x, p);
    return x / pow(Rational(p), v);
}

long residue(const Rational& x, long m) {
    const Integer mm(m);
    Integer den_inv;
    if (mpz_invert(den_inv.get_mpz_t(), x.den().get_mpz_t(), mm.get_mpz_t()) == 0)
        throw DomainError("denominator of " + x.to_string() + " is not invertible mod " + std::to_string(m));
    Integer r = x.num() * den_inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mm.get_mpz_t());
    return r.get_si();
}

UnitClass2 square_class_mod8(const Rational& x) {
    if (x.is_zero()) throw DomainError("square class of zero");
    const int v = valuation(x, 2);
    return UnitClass2{v, static_cast<int>(residue(unit_part(x, 2), 8))};
}

int legendre_symbol(const Integer& a, long p) {
    if (p == 2 || !is_prime(p)) throw DomainError("legendre symbol needs an odd prime, got " + std::to_string(p));
    return mpz_legendre(a.get_mpz_t(), Integer(p).get_mpz_t());
}

int legendre_symbol(const Rational& a, long p) {
    return legendre_symbol(a.num(), p) * legendre_symbol(a.den(), p);
}

int kronecker_symbol(const Integer& a, const Integer& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

int hilbert_symbol(const Rational& a, const Rational& b, long p) {
    require_prime(p);
    if (a.is_zero() || b.is_zero()) throw DomainError("hilbert symbol of zero");
    const int alpha = valuation(a, p);
    const int beta = valuation(b, p);
    const Rational u = unit_part(a, p);
    const Rational v = unit_part(b, p);
    if (p != 2) {
        int s = 1;
        if ((alpha & 1) && (beta & 1) && (p % 4 == 3)) s = -s;
        if (beta & 1) s *= legendre_symbol(u, p);
        if (alpha & 1) s *= legendre_symbol(v, p);
        return s;
    }
    const long um = residue(u, 8);
    const long vm = residue(v, 8);
    auto eps = [](long w) { return ((w - 1) / 2) & 1; };
    auto omega = [](long w) { return ((w * w - 1) / 8) & 1; };
    const long e = eps(um) * eps(vm) + (alpha & 1) * omega(vm) + (beta & 1) * omega(um);
    return (e & 1) ? -1 : 1;
}

}  // namespace nippaudit
