#include "sharemkt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sharemkt {

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "p,S,D,revenue,welfare,regime,converged,iters,max_residual\n";
    for (const auto& r : rows) {
        os << format_float(r.price) << ',' << format_float(r.supply) << ','
           << format_float(r.demand) << ',' << format_float(r.revenue) << ','
           << format_float(r.welfare) << ',' << r.regime << ','
           << (r.converged ? "true" : "false") << ',' << r.iterations << ','
           << format_float(r.max_residual) << '\n';
    }
    return os.str();
}

std::string agents_to_csv(const EquilibriumState& state) {
    std::ostringstream os;
    os << "kind,index,x,s,y\n";
    for (std::size_t i = 0; i < state.owner_actions.size(); ++i) {
        os << "owner," << i << ',' << format_float(state.owner_actions[i].x) << ','
           << format_float(state.owner_actions[i].s) << ",\n";
    }
    for (std::size_t k = 0; k < state.renter_usages.size(); ++k) {
        os << "renter," << k << ",,," << format_float(state.renter_usages[k]) << '\n';
    }
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

}  // namespace sharemkt
