#include "mcasim/csv.hpp"

#include <cstdio>
#include <fstream>

#include "mcasim/errors.hpp"

namespace mcasim {
namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

}  // namespace

std::string format_csv(const std::vector<SweepRow>& rows) {
    if (rows.empty()) throw usage_error("format_csv: no rows to emit");
    std::string out =
        "field_T,alpha_deg,m_a_muB,m_b_muB,m_c_muB,y1,y2,y3,y4,"
        "e_j1,e_j1p,e_j2,e_j2p,e_zeeman,e_mca,e_total,e_mca_per_site,"
        "tau_muB_T,phase,converged\n";
    for (const SweepRow& r : rows) {
        const double nums[] = {r.field_T, r.alpha_deg, r.m_muB[0], r.m_muB[1], r.m_muB[2],
                               r.y[0],    r.y[1],      r.y[2],     r.y[3],     r.e_j1,
                               r.e_j1p,   r.e_j2,      r.e_j2p,    r.e_zeeman, r.e_mca,
                               r.e_total, r.e_mca_per_site, r.tau_muB_T};
        for (double v : nums) {
            append_number(out, v);
            out += ',';
        }
        out += r.phase;
        out += ',';
        out += r.converged ? '1' : '0';
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    const std::string body = format_csv(rows);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("emit_csv: cannot open '" + path + "' for writing");
    out << body;
    out.flush();
    if (!out) throw config_error("emit_csv: write to '" + path + "' failed");
}

}  // namespace mcasim
