#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "nippaudit/jordan.hpp"
#include "nippaudit/matrix.hpp"
#include "nippaudit/model.hpp"

namespace nippaudit {

struct OddSymbolEntry {
    int scale_exp = 0;
    int dim = 0;
    int sign = 1;  // Legendre symbol of the unit determinant

    friend auto operator<=>(const OddSymbolEntry&, const OddSymbolEntry&) = default;
};

// Complete Z_p-invariant for odd p.
struct OddSymbol {
    long prime = 0;
    std::vector<OddSymbolEntry> entries;

    std::string to_string() const;
    friend bool operator==(const OddSymbol&, const OddSymbol&) = default;
};

struct Symbol2Entry {
    int scale_exp = 0;
    int dim = 0;
    int sign = 1;      // +1 iff the unit determinant is +-1 mod 8
    bool odd = false;  // type I
    int oddity = 0;    // trace mod 8 of the odd part; 0 for type II

    friend auto operator<=>(const Symbol2Entry&, const Symbol2Entry&) = default;
};

struct Symbol2 {
    std::vector<Symbol2Entry> constituents;  // scale_exp strictly increasing

    // Maximal runs of type I constituents with consecutive scales (indices).
    std::vector<std::vector<std::size_t>> compartments() const;
    // Maximal runs in which every pair of scale-adjacent forms (empty forms
    // counting as type II) contains a type I form (indices).
    std::vector<std::vector<std::size_t>> trains() const;

    int dimension() const;
    std::string to_string() const;
    friend bool operator==(const Symbol2&, const Symbol2&) = default;
};

struct CanonicalSymbol2 {
    Symbol2 symbol;
    RationalMatrix representative;

    friend bool operator==(const CanonicalSymbol2& a, const CanonicalSymbol2& b) { return a.symbol == b.symbol; }
};

OddSymbol symbol_odd_p(const RationalMatrix& gram, long p);
Symbol2 symbol_2(const RationalMatrix& gram);
// Symbols read off an existing splitting (no re-splitting).
OddSymbol odd_symbol_of(const JordanSplitting& split);
Symbol2 symbol2_of(const JordanSplitting& split);

// Oddity fusion on compartments, then sign walking along trains so that each
// train carries at most one minus sign, on its first constituent.
CanonicalSymbol2 canonicalize_2(const Symbol2& sym);

// Block-diagonal Gram matrix in the Z_2-class of `sym`, depending only on
// the class, built from units {1,3,5,7} and the blocks [[2,1],[1,2]], [[0,1],[1,0]].
RationalMatrix symbol2_representative(const Symbol2& sym);
RationalMatrix odd_symbol_representative(const OddSymbol& sym);

bool equivalent_over_zp(const RationalMatrix& a, const RationalMatrix& b, long p);

// Equal discriminants and pairwise Z_p-equivalence at every p | 2 * disc.
bool same_genus(std::span<const QuadForm> forms);

}  // namespace nippaudit
