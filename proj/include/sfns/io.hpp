#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sfns/drift.hpp"
#include "sfns/paths.hpp"
#include "sfns/rough.hpp"
#include "sfns/slowfast.hpp"

namespace sfns {

// Binary field layout (little-endian):
//   magic "SFLD", u32 version = 1, u32 n, u32 d = 2, u32 norm tag = 1
//   (forward transform carries 1/n^2), then d * n * n complex<double>
//   coefficients, component-major, row-major in (ky, kx) FFT index order.
void write_field(const std::filesystem::path& path, const SpectralField& f);
SpectralField read_field(const std::filesystem::path& path);

nlohmann::json field_to_json(const SpectralField& f);
SpectralField field_from_json(const nlohmann::json& j);

// ScalarPath CSV: header "t,value", LF endings, '.' decimal.
void write_scalar_path_csv(const std::filesystem::path& path, const ScalarPath& p);
ScalarPath read_scalar_path_csv(const std::filesystem::path& path);

// FieldPath binary: magic "SFPT", u32 version, u32 count, u32 n, then per
// sample a f64 time followed by the raw coefficient block.
void write_field_path(const std::filesystem::path& path, const FieldPath& p);
FieldPath read_field_path(const std::filesystem::path& path);

// Trajectory directory: field snapshots snapshot_%06d.sfld plus
// diagnostics.csv with the run ledger columns.
void write_trajectory(const std::filesystem::path& dir, const FieldPath& u,
                      const std::vector<DiagRow>& diag);

// RoughLift binary: magic "SFRL", u32 version, u32 points, u32 modes,
// f64 p, times, level1 (row-major), adjacent level2 tensors (row-major).
void write_lift(const std::filesystem::path& path, const RoughLift& lift);
RoughLift read_lift(const std::filesystem::path& path);

nlohmann::json lift_summary_json(const RoughLift& lift);

nlohmann::json drift_to_json(const DriftResult& d);

// generic CSV writer: classic locale, LF, 17 significant digits
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

}  // namespace sfns
