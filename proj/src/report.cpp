#include "nlpf/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace nlpf {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_diagnostics_csv(const std::string& path, const DiagnosticsSeries& series) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "k,t,mass_deviation,F,pseudo_E,grad_w_norm_sq,newton_iters,final_residual\n";
    for (const DiagnosticsRow& r : series) {
        out << r.k << ',' << format_g17(r.t) << ',' << format_g17(r.mass_deviation) << ','
            << format_g17(r.F) << ',' << format_g17(r.pseudo_E) << ','
            << format_g17(r.grad_w_norm_sq) << ',' << r.newton_iters << ','
            << format_g17(r.final_residual) << '\n';
    }
}

void write_study_csv(const std::string& path, const StudyResult& result) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "coarse_h,fine_h,error_l2,rate\n";
    for (const StudyLevelRow& r : result.rows) {
        out << format_g17(r.coarse_h) << ',' << format_g17(r.fine_h) << ','
            << format_g17(r.error) << ',';
        if (r.rate) out << format_g17(*r.rate);
        out << '\n';
    }
}

namespace {

std::string h_label(double h) {
    const double inv = 1.0 / h;
    const double rounded = std::round(inv);
    char buf[48];
    if (std::abs(inv - rounded) < 1e-9 * inv && rounded > 0)
        std::snprintf(buf, sizeof(buf), "1/%.0f", rounded);
    else
        std::snprintf(buf, sizeof(buf), "%.6g", h);
    return buf;
}

}  // namespace

std::string study_text(const StudyResult& result) {
    std::string out = "coarse h    fine h      ||e_A||_2             rate\n";
    char buf[128];
    for (const StudyLevelRow& r : result.rows) {
        std::string rate = "-";
        if (r.rate) {
            char rb[40];
            std::snprintf(rb, sizeof(rb), "%.15f", *r.rate);
            rate = rb;
        }
        std::snprintf(buf, sizeof(buf), "%-11s %-11s %.15f     %s\n",
                      h_label(r.coarse_h).c_str(), h_label(r.fine_h).c_str(), r.error,
                      rate.c_str());
        out += buf;
    }
    return out;
}

void write_study_text(const std::string& path, const StudyResult& result) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << study_text(result);
}

}  // namespace nlpf
