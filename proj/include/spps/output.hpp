#pragma once

#include <string>
#include <vector>

#include "spps/spectrum.hpp"

namespace spps {

// Formatting is deterministic: every floating-point value is rendered with
// %.17g so that repeated runs produce byte-identical files.
std::string format_double(double v);

std::string eigenvalues_json(const SolveResult& res);
std::string eigenvalues_csv(const SolveResult& res);

struct CharfnSample {
    cplx lambda;
    cplx phi;
    bool outside_trust;
};

std::string charfn_csv(const std::vector<CharfnSample>& samples);

}  // namespace spps
