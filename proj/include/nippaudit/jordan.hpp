#pragma once

#include <vector>

#include "nippaudit/matrix.hpp"
#include "nippaudit/model.hpp"

namespace nippaudit {

// p^scale_exp * unit, where unit is a 1x1 p-adic unit or (p = 2 only) a 2x2
// even block [[2a, b], [b, 2c]] with b odd.
struct JordanBlock {
    int scale_exp = 0;
    RationalMatrix unit;

    int dimension() const { return static_cast<int>(unit.rows()); }
    bool is_even_block() const { return unit.rows() == 2; }
};

// Blocks of equal scale merged into one constituent.
struct JordanConstituent {
    int scale_exp = 0;
    std::vector<RationalMatrix> units;

    int dimension() const;
    RationalMatrix unit_gram() const;
};

struct JordanSplitting {
    long prime = 0;
    std::vector<JordanBlock> blocks;  // scale_exp non-decreasing

    int dimension() const;
    std::vector<JordanConstituent> constituents() const;  // scale_exp strictly increasing
};

// Splits a nondegenerate symmetric rational matrix over Z_p by repeatedly
// removing a pivot of minimal p-valuation. Scales may be negative when the
// input is not p-integral (e.g. the half-integral M at p = 2).
JordanSplitting jordan_split(const RationalMatrix& gram, long p);
JordanSplitting jordan_split(const QuadForm& form, long p);

// Block-diagonal sum of p^scale_exp * unit.
RationalMatrix reassemble(const JordanSplitting& split);

}  // namespace nippaudit
