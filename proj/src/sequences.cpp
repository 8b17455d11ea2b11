#include "fms/sequences.hpp"

#include <cmath>

namespace fms {

std::string nc_witness_csv(const NCWitness& witness) {
    std::string out = "k,n_k,m_k,M_outer,M_inner,residual_outer,residual_inner\n";
    const double bound = 1.0 - witness.eps0;
    for (std::size_t i = 0; i < witness.nk.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += std::to_string(witness.nk[i]);
        out += ',';
        out += std::to_string(witness.mk[i]);
        out += ',';
        out += format_double(witness.outer[i]);
        out += ',';
        out += format_double(witness.inner[i]);
        out += ',';
        out += format_double(std::abs(witness.outer[i] - bound));
        out += ',';
        out += format_double(std::abs(witness.inner[i] - bound));
        out += '\n';
    }
    return out;
}

}  // namespace fms
