#include "nippaudit/splitting_expr.hpp"

#include <cctype>

#include "nippaudit/errors.hpp"

namespace nippaudit {

RationalMatrix SplittingItem::matrix() const {
    if (kind == Kind::Diagonal) {
        RationalMatrix m(1, 1);
        m(0, 0) = value;
        return m;
    }
    const Rational half = scale / Rational(2);
    RationalMatrix m(2, 2);
    m(0, 0) = letter == 'A' ? scale : Rational(0);
    m(1, 1) = m(0, 0);
    m(0, 1) = half;
    m(1, 0) = half;
    return m;
}

int SplittingExpr::dimension() const {
    int n = 0;
    for (const auto& item : items()) n += item.dimension();
    return n;
}

std::vector<SplittingItem> SplittingExpr::items() const {
    std::vector<SplittingItem> out;
    for (const auto& g : groups) out.insert(out.end(), g.items.begin(), g.items.end());
    return out;
}

RationalMatrix SplittingExpr::matrix() const {
    std::vector<RationalMatrix> blocks;
    for (const auto& item : items()) blocks.push_back(item.matrix());
    return block_diagonal(blocks);
}

std::string SplittingExpr::to_string() const {
    std::string out;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (g) out += '+';
        if (groups[g].bracketed) out += '[';
        for (std::size_t i = 0; i < groups[g].items.size(); ++i) {
            if (i) out += '+';
            out += groups[g].items[i].text;
        }
        if (groups[g].bracketed) out += ']';
    }
    return out;
}

namespace {

class Parser {
public:
    Parser(std::string_view text, long p) : text_(text), p_(p) {}

    SplittingExpr parse() {
        SplittingExpr expr;
        skip_ws();
        if (at_end()) fail("empty splitting");
        expr.groups.push_back(group());
        skip_ws();
        while (!at_end()) {
            expect('+');
            skip_ws();
            expr.groups.push_back(group());
            skip_ws();
        }
        return expr;
    }

private:
    SplittingGroup group() {
        SplittingGroup g;
        if (peek() == '[') {
            ++pos_;
            g.bracketed = true;
            skip_ws();
            g.items.push_back(item());
            skip_ws();
            while (peek() == '+') {
                ++pos_;
                skip_ws();
                g.items.push_back(item());
                skip_ws();
            }
            expect(']');
        } else {
            g.items.push_back(item());
        }
        return g;
    }

    SplittingItem item() {
        const std::size_t start = pos_;
        SplittingItem it;
        if (peek() == '(') {
            ++pos_;
            skip_ws();
            const std::size_t at = pos_;
            it.value = rational();
            skip_ws();
            expect(')');
            it.kind = SplittingItem::Kind::Diagonal;
            check_diagonal(it.value, at);
        } else {
            const std::size_t at = pos_;
            Rational q(1);
            if (peek() == '-' || peek() == '+' || std::isdigit(static_cast<unsigned char>(peek()))) q = rational();
            skip_ws();
            const char c = peek();
            if (c == 'A' || c == 'B') {
                ++pos_;
                it.kind = SplittingItem::Kind::EvenBlock;
                it.letter = c;
                it.scale = q;
                if (q.sign() <= 0) fail_at(at, "even block scale must be positive");
            } else if (pos_ != at) {
                it.kind = SplittingItem::Kind::Diagonal;
                it.value = q;
                check_diagonal(q, at);
            } else {
                fail(c == '\0' ? "unexpected end of splitting" : std::string("unknown token '") + c + "'");
            }
        }
        for (std::size_t k = start; k < pos_; ++k)
            if (!std::isspace(static_cast<unsigned char>(text_[k]))) it.text += text_[k];
        return it;
    }

    Rational rational() {
        const std::size_t start = pos_;
        if (peek() == '-' || peek() == '+') ++pos_;
        digits(start);
        if (peek() == '/') {
            ++pos_;
            digits(start);
        }
        try {
            return Rational::parse(text_.substr(start, pos_ - start));
        } catch (const DomainError& e) {
            fail_at(start, e.what());
        }
    }

    void digits(std::size_t start) {
        const std::size_t from = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (pos_ == from) fail_at(start, "expected a number");
    }

    void check_diagonal(const Rational& v, std::size_t at) {
        if (v.is_zero()) fail_at(at, "zero diagonal entry");
        if (p_ == 2 && v.den() % 2 == 0) fail_at(at, "diagonal entry with even denominator at p=2");
    }

    void expect(char c) {
        if (peek() != c) {
            const char got = peek();
            fail(std::string("expected '") + c + "', found " +
                 (got == '\0' ? std::string("end of input") : std::string("'") + got + "'"));
        }
        ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool at_end() const { return pos_ >= text_.size(); }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
        throw ParseError("splitting", 0, at + 1, what + " in \"" + std::string(text_) + "\"");
    }

    std::string_view text_;
    long p_;
    std::size_t pos_ = 0;
};

}  // namespace

SplittingExpr parse_splitting_expr(std::string_view text, long p) { return Parser(text, p).parse(); }

SplittingExpr splitting_expr_of(const RationalMatrix& m, long p) {
    auto v_p = [p](const Rational& x) {
        int v = 0;
        Integer num = x.num(), den = x.den();
        while (num % p == 0) num /= p, ++v;
        while (den % p == 0) den /= p, --v;
        return v;
    };
    SplittingExpr expr;
    int current_scale = 0;
    const Eigen::Index n = m.rows();
    for (Eigen::Index i = 0; i < n;) {
        SplittingItem it;
        int scale = 0;
        const bool pair = i + 1 < n && !m(i, i + 1).is_zero();
        for (Eigen::Index j = 0; j < n; ++j) {
            const bool in_block = j == i || (pair && j == i + 1);
            if (!in_block && (!m(i, j).is_zero() || (pair && !m(i + 1, j).is_zero())))
                throw DomainError("splitting_expr_of: matrix is not block diagonal");
        }
        if (pair) {
            const Rational q = m(i, i + 1) * Rational(2);
            if (m(i, i) == q && m(i + 1, i + 1) == q) it.letter = 'A';
            else if (m(i, i).is_zero() && m(i + 1, i + 1).is_zero()) it.letter = 'B';
            else throw DomainError("splitting_expr_of: 2x2 block is neither qA nor qB");
            it.kind = SplittingItem::Kind::EvenBlock;
            it.scale = q;
            it.text = q.to_string() + it.letter;
            scale = v_p(m(i, i + 1));
            i += 2;
        } else {
            if (m(i, i).is_zero()) throw DegenerateForm("splitting_expr_of: zero diagonal entry");
            it.value = m(i, i);
            it.text = "(" + it.value.to_string() + ")";
            scale = v_p(it.value);
            i += 1;
        }
        if (expr.groups.empty() || scale != current_scale) {
            expr.groups.push_back({{}, true});
            current_scale = scale;
        }
        expr.groups.back().items.push_back(it);
    }
    return expr;
}

}  // namespace nippaudit
