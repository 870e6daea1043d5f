#include "coker/report.hpp"

#include <iomanip>

namespace coker {

std::string partition_label(const Partition& lambda) {
    return lambda.empty() ? "trivial" : lambda.to_string();
}

std::string group_label(const Partition& lambda, std::uint64_t p) {
    if (lambda.empty()) return "1";
    std::string out;
    for (int part : lambda.parts()) {
        if (!out.empty()) out += '+';
        std::uint64_t m = 1;
        for (int i = 0; i < part; ++i) m *= p;
        out += "Z/" + std::to_string(m);
    }
    return out;
}

nlohmann::json without_timing(nlohmann::json j) {
    j.erase("timing");
    return j;
}

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_bin(std::ostream& out, const BinRow& row) {
    out << csv_quote(row.partition) << ',' << row.count << ',' << row.frequency << ','
        << row.theory << ',' << row.expected << ',' << row.wilson_lo << ',' << row.wilson_hi
        << '\n';
}

} // namespace

void write_bins_csv(std::ostream& out, const ExperimentReport& report) {
    out << std::setprecision(10);
    out << "partition,count,frequency,theory,expected,wilson_lo,wilson_hi\n";
    for (const auto& row : report.bins) write_bin(out, row);
    write_bin(out, report.other);
}

void write_moments_csv(std::ostream& out, const ExperimentReport& report) {
    out << std::setprecision(10);
    out << "mu,quantity,target_kind,samples,mean,std_error,target,target_exact,limit,z,within_3sigma\n";
    for (const auto& m : report.moments) {
        out << csv_quote(m.mu) << ',' << m.quantity << ',' << m.target_kind << ',' << m.samples
            << ',' << m.mean << ',' << m.std_error << ',' << m.target << ',' << m.target_exact
            << ',' << m.limit << ',' << m.z << ',' << (m.within_3sigma ? "true" : "false") << '\n';
    }
}

void write_csv(std::ostream& out, const SaturationSweep& sweep) {
    out << std::setprecision(10);
    out << "e,samples,saturated,fraction,std_error,exact,within_3sigma\n";
    for (const auto& r : sweep.rows) {
        out << r.e << ',' << r.samples << ',' << r.saturated << ',' << r.fraction << ','
            << r.std_error << ',';
        if (r.exact) out << *r.exact;
        out << ',';
        if (r.within_3sigma) out << (*r.within_3sigma ? "true" : "false");
        out << '\n';
    }
}

void write_csv(std::ostream& out, const ConvergenceSweep& sweep) {
    out << std::setprecision(10);
    out << "n,samples,tv_distance\n";
    for (const auto& r : sweep.rows) {
        out << r.n << ',' << r.samples << ',';
        if (r.tv_distance) out << *r.tv_distance;
        out << '\n';
    }
}

void write_table(std::ostream& out, const ExperimentReport& report) {
    out << std::setprecision(6);
    out << report.kind << " experiment: " << report.samples << " samples, seed "
        << report.config.seed << ", n=" << report.config.n << ", u=" << report.config.u << '\n';
    if (!report.bins.empty() || report.other.count > 0) {
        out << std::left << std::setw(24) << "partition" << std::right << std::setw(10) << "count"
            << std::setw(14) << "frequency" << std::setw(14) << "theory" << '\n';
        auto row = [&](const BinRow& b) {
            out << std::left << std::setw(24) << b.partition << std::right << std::setw(10)
                << b.count << std::setw(14) << b.frequency << std::setw(14) << b.theory << '\n';
        };
        for (const auto& b : report.bins) row(b);
        row(report.other);
    }
    if (report.chi_square) {
        out << "chi-square " << report.chi_square->statistic << " on " << report.chi_square->dof
            << " dof, p = " << report.chi_square->p_value << '\n';
    }
    if (report.target) {
        out << "target " << report.target->partition << ": frequency " << report.target->frequency
            << ", theory " << report.target->theory << ", Wilson 99% [" << report.target->wilson_lo
            << ", " << report.target->wilson_hi << "]\n";
    }
    for (const auto& m : report.moments) {
        out << "E #Sur(" << m.quantity << ", " << m.mu << ") = " << m.mean << " +/- "
            << m.std_error << "  vs " << m.target_kind << ' ' << m.target << " (z = " << m.z
            << ")\n";
    }
    out << "saturation fraction " << report.saturation_fraction << '\n';
    for (const auto& a : report.assertions) {
        out << (a.passed ? "[PASS] " : "[FAIL] ") << a.name << ": " << a.detail << '\n';
    }
}

void write_table(std::ostream& out, const SaturationSweep& sweep) {
    out << std::setprecision(6);
    out << "saturation sweep p=" << sweep.p << " u=" << sweep.u << " n=" << sweep.n << '\n';
    out << std::setw(4) << "e" << std::setw(10) << "samples" << std::setw(14) << "fraction"
        << std::setw(14) << "std_error" << std::setw(14) << "exact" << '\n';
    for (const auto& r : sweep.rows) {
        out << std::setw(4) << r.e << std::setw(10) << r.samples << std::setw(14) << r.fraction
            << std::setw(14) << r.std_error << std::setw(14);
        if (r.exact) out << *r.exact; else out << "-";
        out << '\n';
    }
}

void write_table(std::ostream& out, const ConvergenceSweep& sweep) {
    out << std::setprecision(6);
    out << "convergence sweep p=" << sweep.p << " u=" << sweep.u << " e=" << sweep.e << '\n';
    out << std::setw(6) << "n" << std::setw(10) << "samples" << std::setw(14) << "tv" << '\n';
    for (const auto& r : sweep.rows) {
        out << std::setw(6) << r.n << std::setw(10) << r.samples << std::setw(14);
        if (r.tv_distance) out << *r.tv_distance; else out << "-";
        out << '\n';
    }
}

} // namespace coker
