#include "spps/output.hpp"

#include <cstdio>

namespace spps {

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static void append_record(std::string& out, const EigenvalueEstimate& e,
                          bool last) {
    out += "  {\"index_hint\": ";
    out += std::to_string(e.index_hint);
    out += ", \"re\": ";
    out += format_double(e.lambda.real());
    out += ", \"im\": ";
    out += format_double(e.lambda.imag());
    out += ", \"residual\": ";
    out += format_double(e.residual);
    out += ", \"center_re\": ";
    out += format_double(e.center_used.real());
    out += ", \"center_im\": ";
    out += format_double(e.center_used.imag());
    out += ", \"outside_theorem_hypotheses\": ";
    out += e.outside_theorem_hypotheses ? "true" : "false";
    out += last ? "}\n" : "},\n";
}

std::string eigenvalues_json(const SolveResult& res) {
    std::string out = "{\n\"eigenvalues\": [\n";
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
        append_record(out, res.eigenvalues[i],
                      i + 1 == res.eigenvalues.size());
    out += "],\n\"warnings\": [";
    for (std::size_t i = 0; i < res.warnings.size(); ++i) {
        out += '"';
        out += res.warnings[i];
        out += '"';
        if (i + 1 < res.warnings.size()) out += ", ";
    }
    out += "]\n}\n";
    return out;
}

std::string eigenvalues_csv(const SolveResult& res) {
    std::string out =
        "index_hint,re,im,residual,center_re,center_im,"
        "outside_theorem_hypotheses\n";
    for (const auto& e : res.eigenvalues) {
        out += std::to_string(e.index_hint);
        out += ',';
        out += format_double(e.lambda.real());
        out += ',';
        out += format_double(e.lambda.imag());
        out += ',';
        out += format_double(e.residual);
        out += ',';
        out += format_double(e.center_used.real());
        out += ',';
        out += format_double(e.center_used.imag());
        out += ',';
        out += e.outside_theorem_hypotheses ? "1" : "0";
        out += '\n';
    }
    return out;
}

std::string charfn_csv(const std::vector<CharfnSample>& samples) {
    std::string out = "re_lambda,im_lambda,abs_phi,re_phi,im_phi,warning\n";
    for (const auto& s : samples) {
        out += format_double(s.lambda.real());
        out += ',';
        out += format_double(s.lambda.imag());
        out += ',';
        out += format_double(std::abs(s.phi));
        out += ',';
        out += format_double(s.phi.real());
        out += ',';
        out += format_double(s.phi.imag());
        out += ',';
        out += s.outside_trust ? "outside_trust_radius" : "";
        out += '\n';
    }
    return out;
}

}  // namespace spps
