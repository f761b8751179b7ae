#pragma once

// Synthetic table corpus: complete class lists for small determinants,
// grouped into genera, with appendix entries in a chosen normalization.

#include <vector>

#include "nippaudit/ingest.hpp"

namespace fixture {

struct Normalization {
    nippaudit::Rational at_two{1, 2};
    nippaudit::Rational at_odd{1, 2};
};

// Genera of primitive forms with det(2M) = d, each with its classes.
std::vector<std::vector<nippaudit::IntMatrix>> genera_of_det(long long d);

nippaudit::RawDataset build(const std::vector<long long>& discriminants, const Normalization& norm = {});

// Discriminants used for the committed fixture files.
const std::vector<long long>& standard_discriminants();

}  // namespace fixture
