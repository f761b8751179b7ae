#include "fixture.hpp"

#include <algorithm>
#include <numeric>

#include "nippaudit/arith.hpp"
#include "nippaudit/autmass.hpp"
#include "nippaudit/symbol.hpp"
#include "oracles.hpp"

namespace fixture {

using namespace nippaudit;

namespace {

bool primitive(const IntMatrix& s) {
    long long g = 0;
    for (Eigen::Index i = 0; i < 4; ++i) {
        g = std::gcd(g, s(i, i) / 2);
        for (Eigen::Index j = i + 1; j < 4; ++j) g = std::gcd(g, s(i, j));
    }
    return g == 1;
}

}  // namespace

std::vector<std::vector<IntMatrix>> genera_of_det(long long d) {
    std::vector<IntMatrix> classes;
    for (const auto& c : oracle::classes_of_det(d))
        if (primitive(c)) classes.push_back(c);
    std::sort(classes.begin(), classes.end(), [](const IntMatrix& a, const IntMatrix& b) {
        return QuadForm::from_doubled_gram(a).coeffs() < QuadForm::from_doubled_gram(b).coeffs();
    });
    std::vector<std::vector<IntMatrix>> genera;
    for (const auto& c : classes) {
        const QuadForm f = QuadForm::from_doubled_gram(c);
        auto it = std::find_if(genera.begin(), genera.end(), [&](const std::vector<IntMatrix>& g) {
            const std::vector<QuadForm> pair{QuadForm::from_doubled_gram(g.front()), f};
            return same_genus(pair);
        });
        if (it == genera.end()) genera.push_back({c});
        else it->push_back(c);
    }
    return genera;
}

RawDataset build(const std::vector<long long>& discriminants, const Normalization& norm) {
    RawDataset data;
    for (long long d : discriminants) {
        const auto genera = genera_of_det(d);
        for (std::size_t gi = 0; gi < genera.size(); ++gi) {
            GenusRecord g;
            g.discriminant = d;
            g.genus_id = static_cast<int>(gi + 1);
            g.mass = Rational(0);
            const auto primes = bad_primes(Integer(static_cast<long>(d)));
            for (const auto& s : genera[gi]) {
                FormRecord f;
                f.form = QuadForm::from_doubled_gram(s);
                f.level = oracle::level(s);
                f.aut_count = oracle::aut(s);
                for (long p : primes) f.hasse[p] = hasse_symbol_of_form(f.form, p);
                g.mass += Rational(1) / Rational(static_cast<long long>(f.aut_count));
                g.forms.push_back(f);
            }
            const QuadForm& first = g.forms.front().form;
            for (long p : primes) {
                AppendixEntry e;
                e.density = local_density(first, p) * (p == 2 ? norm.at_two : norm.at_odd);
                const RationalMatrix rep = p == 2 ? canonicalize_2(symbol_2(first.gram())).representative
                                                  : odd_symbol_representative(symbol_odd_p(first.gram(), p));
                e.splitting = splitting_expr_of(rep, p);
                g.appendix[p] = e;
            }
            data.genera.push_back(std::move(g));
        }
    }
    return data;
}

const std::vector<long long>& standard_discriminants() {
    static const std::vector<long long> ds{4, 5, 8, 9, 12, 13, 16, 17, 20, 21, 24, 25, 28, 29, 32, 33, 36, 37, 40, 41, 44, 45, 48, 49, 52, 53, 56, 57, 60, 61, 64};
    return ds;
}

}  // namespace fixture
