#pragma once

#include <random>
#include <vector>

#include "nippaudit/model.hpp"
#include "oracles.hpp"

namespace testutil {

inline const nippaudit::QuadForm& golden_form() {
    static const nippaudit::QuadForm f(nippaudit::Coeffs{1, 1, 11, 11, 1, 0, 0, 1, 0, 8});
    return f;
}

inline nippaudit::QuadForm diag_form(long long a, long long b, long long c, long long d) {
    return nippaudit::QuadForm(nippaudit::Coeffs{a, b, c, d, 0, 0, 0, 0, 0, 0});
}

// A spread of positive definite forms from the class enumerator plus the golden form.
inline const std::vector<nippaudit::QuadForm>& sample_forms() {
    static const std::vector<nippaudit::QuadForm> forms = [] {
        std::vector<nippaudit::QuadForm> out{golden_form()};
        for (long long d : {16LL, 48LL, 75LL, 108LL, 128LL, 225LL, 256LL}) {
            const auto classes = oracle::classes_of_det(d);
            for (std::size_t i = 0; i < classes.size(); i += 2)
                out.push_back(nippaudit::QuadForm::from_doubled_gram(classes[i]));
        }
        return out;
    }();
    return forms;
}

inline nippaudit::QuadForm transformed(const nippaudit::QuadForm& f, const nippaudit::IntMatrix& t) {
    return nippaudit::QuadForm::from_doubled_gram(nippaudit::IntMatrix(t.transpose() * f.doubled_gram() * t));
}

}  // namespace testutil
