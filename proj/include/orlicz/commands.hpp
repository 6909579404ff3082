#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "orlicz/config.hpp"
#include "orlicz/report.hpp"

namespace orlicz {

enum class Command { certify, solve, inequalities, stability };
Command parse_command(std::string_view name);
const char* to_string(Command c) noexcept;

/// Growth and structure certificates for the configured phi.
std::vector<ReportRow> certify_rows(const ExperimentConfig& cfg);

/// Solver diagnostics. Writes the mesh with f, psi and u into
/// `field_path` when it is not empty.
std::vector<ReportRow> solve_rows(const ExperimentConfig& cfg, const std::filesystem::path& field_path = {});

/// Solves once, then evaluates every configured inequality on the solution.
std::vector<ReportRow> inequality_rows(const ExperimentConfig& cfg);

std::vector<ReportRow> stability_rows(const ExperimentConfig& cfg);

/// Runs `command`, writes `<out_dir>/<csv>` (and the field file for
/// `solve`) and returns the rows.
std::vector<ReportRow> run_command(Command command, const ExperimentConfig& cfg);

}  // namespace orlicz
