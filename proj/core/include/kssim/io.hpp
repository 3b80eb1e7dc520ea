#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kssim/diagnostics.hpp"

namespace kssim::io {

/// Shortest decimal string that parses back to exactly `x` ("inf", "-inf", "nan"
/// for non-finite values).
std::string format_double(double x);

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Time-series CSV: t,mass,linf_gap,u_linf,min_u,min_v then gradv_L{q} and u_L{r}
/// for every sampled order, one line per row.
std::string trajectory_csv(const std::vector<DiagnosticsRow>& rows, const DiagnosticsSpec& spec);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace kssim::io
