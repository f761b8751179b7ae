#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nippaudit/matrix.hpp"
#include "nippaudit/rational.hpp"

namespace nippaudit {

// One term of an appendix splitting such as "[2A]+[(58/3)+(38/29)]".
//
// An even block "qA" is the binary block [[q, q/2], [q/2, q]] and "qB" is
// [[0, q/2], [q/2, 0]]; "(x)" is a 1-dimensional diagonal entry x.
struct SplittingItem {
    enum class Kind { EvenBlock, Diagonal };

    Kind kind = Kind::Diagonal;
    char letter = 0;        // 'A' or 'B' for even blocks
    Rational scale{1};      // q of "qA"/"qB"
    Rational value{0};      // diagonal entry
    std::string text;       // token as written, without surrounding whitespace

    int dimension() const { return kind == Kind::EvenBlock ? 2 : 1; }
    RationalMatrix matrix() const;
};

struct SplittingGroup {
    std::vector<SplittingItem> items;
    bool bracketed = false;
};

struct SplittingExpr {
    std::vector<SplittingGroup> groups;

    int dimension() const;
    std::vector<SplittingItem> items() const;
    // Block-diagonal Gram matrix in written order.
    RationalMatrix matrix() const;
    // Token sequence as written, whitespace removed.
    std::string to_string() const;

    friend bool operator==(const SplittingExpr& a, const SplittingExpr& b) { return a.to_string() == b.to_string(); }
};

// Parses Nipp's appendix notation. Throws ParseError (column = 1-based
// position in `text`) on unknown tokens; at p = 2 every diagonal entry must
// have odd denominator.
SplittingExpr parse_splitting_expr(std::string_view text, long p);

// Writes a block-diagonal matrix of 1x1 entries and qA/qB blocks in the
// appendix notation, one bracketed group per p-adic scale in matrix order.
SplittingExpr splitting_expr_of(const RationalMatrix& blocks, long p);

}  // namespace nippaudit
