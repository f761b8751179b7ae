#include "nippaudit/symbol.hpp"

#include <array>
#include <functional>

#include "nippaudit/arith.hpp"
#include "nippaudit/errors.hpp"

namespace nippaudit {

namespace {

std::string scale_string(long p, int k) { return pow(Rational(p), k).to_string(); }

std::string signed_dim(int sign, int dim) { return (sign < 0 ? "-" : "") + std::to_string(dim); }

int sign_mod8(long residue) { return (residue == 1 || residue == 7) ? 1 : -1; }

}  // namespace

// ---------------------------------------------------------------------------
// Odd p

std::string OddSymbol::to_string() const {
    std::string out;
    for (const auto& e : entries) {
        if (!out.empty()) out += ' ';
        out += scale_string(prime, e.scale_exp) + "^" + signed_dim(e.sign, e.dim);
    }
    return out;
}

OddSymbol odd_symbol_of(const JordanSplitting& split) {
    OddSymbol sym{split.prime, {}};
    for (const auto& c : split.constituents()) {
        const Rational d = determinant(c.unit_gram());
        sym.entries.push_back({c.scale_exp, c.dimension(), legendre_symbol(d, split.prime)});
    }
    return sym;
}

OddSymbol symbol_odd_p(const RationalMatrix& gram, long p) {
    if (p == 2) throw DomainError("symbol_odd_p needs an odd prime");
    return odd_symbol_of(jordan_split(gram, p));
}

RationalMatrix odd_symbol_representative(const OddSymbol& sym) {
    long nonresidue = 2;
    while (legendre_symbol(Integer(nonresidue), sym.prime) != -1) ++nonresidue;
    std::vector<RationalMatrix> blocks;
    for (const auto& e : sym.entries) {
        const Rational q = pow(Rational(sym.prime), e.scale_exp);
        for (int i = 0; i < e.dim; ++i) {
            RationalMatrix m(1, 1);
            m(0, 0) = (i + 1 == e.dim && e.sign < 0) ? q * Rational(nonresidue) : q;
            blocks.push_back(m);
        }
    }
    return block_diagonal(blocks);
}

// ---------------------------------------------------------------------------
// p = 2

int Symbol2::dimension() const {
    int n = 0;
    for (const auto& c : constituents) n += c.dim;
    return n;
}

std::string Symbol2::to_string() const {
    std::string out;
    for (const auto& c : constituents) {
        if (!out.empty()) out += ' ';
        out += scale_string(2, c.scale_exp) + "^" + signed_dim(c.sign, c.dim);
        out += c.odd ? "_" + std::to_string(c.oddity) : "_II";
    }
    return out;
}

std::vector<std::vector<std::size_t>> Symbol2::compartments() const {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < constituents.size(); ++i) {
        if (!constituents[i].odd) continue;
        if (!out.empty() && out.back().back() + 1 == i &&
            constituents[i - 1].scale_exp + 1 == constituents[i].scale_exp) {
            out.back().push_back(i);
        } else {
            out.push_back({i});
        }
    }
    return out;
}

std::vector<std::vector<std::size_t>> Symbol2::trains() const {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < constituents.size(); ++i) {
        bool joins = false;
        if (i > 0) {
            const auto& prev = constituents[i - 1];
            const auto& cur = constituents[i];
            const int gap = cur.scale_exp - prev.scale_exp;
            if (gap == 1) joins = prev.odd || cur.odd;
            else if (gap == 2) joins = prev.odd && cur.odd;
        }
        if (joins) out.back().push_back(i);
        else out.push_back({i});
    }
    return out;
}

Symbol2 symbol2_of(const JordanSplitting& split) {
    if (split.prime != 2) throw DomainError("symbol2_of needs a 2-adic splitting");
    Symbol2 sym;
    for (const auto& c : split.constituents()) {
        Symbol2Entry e;
        e.scale_exp = c.scale_exp;
        e.dim = c.dimension();
        e.sign = sign_mod8(residue(determinant(c.unit_gram()), 8));
        long trace = 0;
        for (const auto& u : c.units) {
            if (u.rows() == 1) {
                e.odd = true;
                trace += residue(u(0, 0), 8);
            }
        }
        e.oddity = e.odd ? static_cast<int>(trace % 8) : 0;
        sym.constituents.push_back(e);
    }
    return sym;
}

Symbol2 symbol_2(const RationalMatrix& gram) { return symbol2_of(jordan_split(gram, 2)); }

namespace {

// Oddity fusion, then sign walking.
Symbol2 canonical_symbol(const Symbol2& input) {
    Symbol2 sym = input;
    auto& cs = sym.constituents;
    const auto compartments = sym.compartments();
    for (const auto& comp : compartments) {
        int total = 0;
        for (std::size_t i : comp) {
            total += cs[i].oddity;
            cs[i].oddity = 0;
        }
        cs[comp.front()].oddity = total % 8;
    }
    for (const auto& train : sym.trains()) {
        for (std::size_t k = train.size(); k-- > 1;) {
            const std::size_t i = train[k];
            if (cs[i].sign > 0) continue;
            cs[i].sign = 1;
            cs[i - 1].sign = -cs[i - 1].sign;
            for (const auto& comp : compartments) {
                const bool touches = std::find(comp.begin(), comp.end(), i) != comp.end() ||
                                     std::find(comp.begin(), comp.end(), i - 1) != comp.end();
                if (touches) cs[comp.front()].oddity = (cs[comp.front()].oddity + 4) % 8;
            }
        }
    }
    return sym;
}

}  // namespace

CanonicalSymbol2 canonicalize_2(const Symbol2& input) {
    return CanonicalSymbol2{canonical_symbol(input), symbol2_representative(input)};
}

// Canonical spellings need not be literally realizable (walking moves signs
// without moving units), so candidates are enumerated and compared by class.
// Order: per constituent by scale, units ascending, B blocks before A.
RationalMatrix symbol2_representative(const Symbol2& sym) {
    static const std::array<long, 4> kUnits{1, 3, 5, 7};
    const auto& cs = sym.constituents;
    for (const auto& c : cs)
        if (!c.odd && c.dim % 2 != 0) throw DomainError("type II constituent of odd dimension in " + sym.to_string());
    const Symbol2 target = canonical_symbol(sym);

    std::vector<std::vector<long>> units(cs.size());
    std::vector<bool> with_a(cs.size(), false);
    Symbol2 literal = sym;
    std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
        if (i == cs.size()) return canonical_symbol(literal) == target;
        auto& entry = literal.constituents[i];
        if (!cs[i].odd) {
            for (bool a : {false, true}) {
                with_a[i] = a;
                entry.sign = a ? -1 : 1;
                if (search(i + 1)) return true;
            }
            return false;
        }
        std::vector<long>& chosen = units[i];
        std::function<bool(int)> pick = [&](int k) -> bool {
            if (k == cs[i].dim) {
                int s = 1;
                long total = 0;
                for (long u : chosen) s *= sign_mod8(u), total += u;
                entry.sign = s;
                entry.oddity = static_cast<int>(total % 8);
                return search(i + 1);
            }
            for (long u : kUnits) {
                if (!chosen.empty() && u < chosen.back()) continue;
                chosen.push_back(u);
                if (pick(k + 1)) return true;
                chosen.pop_back();
            }
            return false;
        };
        return pick(0);
    };
    if (!search(0)) throw DomainError("no 2-adic form realizes symbol " + sym.to_string());

    std::vector<RationalMatrix> blocks;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const Rational q = pow(Rational(2), cs[i].scale_exp);
        if (cs[i].odd) {
            for (long u : units[i]) {
                RationalMatrix m(1, 1);
                m(0, 0) = q * Rational(u);
                blocks.push_back(m);
            }
            continue;
        }
        for (int b = 0; b < cs[i].dim / 2; ++b) {
            const bool a_type = b == 0 && with_a[i];
            RationalMatrix m(2, 2);
            m(0, 0) = a_type ? q * Rational(2) : Rational(0);
            m(1, 1) = m(0, 0);
            m(0, 1) = q;
            m(1, 0) = q;
            blocks.push_back(m);
        }
    }
    return block_diagonal(blocks);
}

// ---------------------------------------------------------------------------

bool equivalent_over_zp(const RationalMatrix& a, const RationalMatrix& b, long p) {
    if (a.rows() != b.rows()) throw DomainError("equivalent_over_zp: dimension mismatch");
    if (p == 2) return canonical_symbol(symbol_2(a)) == canonical_symbol(symbol_2(b));
    return symbol_odd_p(a, p) == symbol_odd_p(b, p);
}

bool same_genus(std::span<const QuadForm> forms) {
    if (forms.empty()) throw DomainError("same_genus of an empty list");
    const long long disc = discriminant_of(forms[0]);
    const RationalMatrix first = forms[0].gram();
    for (const auto& f : forms.subspan(1))
        if (discriminant_of(f) != disc) return false;
    for (long p : bad_primes(Integer(static_cast<long>(disc)))) {
        for (const auto& f : forms.subspan(1))
            if (!equivalent_over_zp(first, f.gram(), p)) return false;
    }
    return true;
}

}  // namespace nippaudit
