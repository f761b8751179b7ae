#pragma once

#include <compare>
#include <vector>

#include "nippaudit/errors.hpp"
#include "nippaudit/rational.hpp"

namespace nippaudit {

// Square class of a nonzero element of Q_2: 2^valuation * u with u odd, u mod 8.
struct UnitClass2 {
    int valuation = 0;
    int unit_mod8 = 1;

    friend auto operator<=>(const UnitClass2&, const UnitClass2&) = default;
};

bool is_prime(long n);

// Distinct prime divisors, ascending. n must be nonzero.
std::vector<long> prime_divisors(Integer n);

// Primes dividing 2 * n, ascending.
std::vector<long> bad_primes(const Integer& n);

int valuation(const Integer& x, long p);
int valuation(const Rational& x, long p);

// x / p^valuation(x, p).
Rational unit_part(const Rational& x, long p);

// Residue mod m of a rational whose denominator is prime to m.
long residue(const Rational& x, long m);

UnitClass2 square_class_mod8(const Rational& x);

int legendre_symbol(const Integer& a, long p);
int legendre_symbol(const Rational& a, long p);
int kronecker_symbol(const Integer& a, const Integer& n);

int hilbert_symbol(const Rational& a, const Rational& b, long p);

}  // namespace nippaudit
