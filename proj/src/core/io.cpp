#include "io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace msdiff {

std::string format_g17(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorCode::Io, "cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) raise(ErrorCode::Io, "write failed for '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) raise(ErrorCode::Io, "cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::Io, "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string entropy_series_csv(const Trajectory& trajectory) {
    std::ostringstream out;
    const int n = trajectory.ledger.empty() ? 0
                                            : static_cast<int>(trajectory.ledger.front().masses.size());
    out << "t,entropy,dissipation_rate,cumulative_dissipation,residual,pairing_gap,min_c,"
           "repair_magnitude";
    for (int i = 1; i <= n; ++i) out << ",mass_" << i;
    out << "\n";
    for (const LedgerEntry& row : trajectory.ledger) {
        out << format_g17(row.t) << ',' << format_g17(row.entropy) << ','
            << format_g17(row.dissipation_rate) << ',' << format_g17(row.cumulative_dissipation)
            << ',' << format_g17(row.residual) << ',' << format_g17(row.pairing_gap) << ','
            << format_g17(row.min_concentration) << ',' << format_g17(row.repair_magnitude);
        for (int i = 0; i < n; ++i) out << ',' << format_g17(row.masses(i));
        out << "\n";
    }
    return out.str();
}

std::string snapshot_csv(const Snapshot& snapshot, const Grid1D& grid) {
    std::ostringstream out;
    const int n = snapshot.state.n_species();
    out << "x";
    for (int i = 1; i <= n; ++i) out << ",c_" << i;
    out << "\n";
    for (int k = 0; k < grid.num_cells; ++k) {
        out << format_g17(grid.cell_center(k));
        for (int i = 0; i < n; ++i) out << ',' << format_g17(snapshot.state.concentrations(k, i));
        out << "\n";
    }
    return out.str();
}

std::string audit_report_json(const AuditReport& report) {
    nlohmann::ordered_json j;
    j["definition_checks"] = {
        {"bounds_ok", report.bounds_ok},
        {"simplex_ok", report.simplex_ok},
        {"regularity_ok", report.regularity_ok},
    };
    j["min_concentration"] = report.min_concentration;
    j["max_concentration"] = report.max_concentration;
    j["max_sum_deviation"] = report.max_sum_deviation;
    j["sqrt_h1_norm"] = report.sqrt_h1_norm;
    j["continuity_modulus"] = report.continuity_modulus;
    j["mol_commutation_gap"] = report.mol_commutation_gap;
    j["max_weak_residual"] = report.max_weak_residual;
    j["max_renorm_residual"] = report.max_renorm_residual;
    auto weak = nlohmann::ordered_json::array();
    for (const auto& entry : report.weak_residuals)
        weak.push_back({{"species", entry.species + 1},
                        {"test_function", entry.test_function},
                        {"value", entry.value}});
    j["weak_residuals"] = weak;
    auto renorm = nlohmann::ordered_json::array();
    for (const auto& entry : report.renorm_residuals)
        renorm.push_back(
            {{"species", entry.species + 1}, {"beta", entry.beta}, {"value", entry.value}});
    j["renorm_residuals"] = renorm;
    return j.dump(2) + "\n";
}

} // namespace msdiff
