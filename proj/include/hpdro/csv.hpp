#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hpdro/evaluation.hpp"
#include "hpdro/model.hpp"
#include "hpdro/uncertainty.hpp"

namespace hpdro::io {

/// Parsed CSV: one header row, then data rows. Lines starting with '#' are
/// comments and carry provenance, never data.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text, const std::string& origin);

/// Provenance comment placed at the top of every emitted artifact:
/// "# hpdro <version> manifest <hash as 16 hex digits>".
std::string provenance_line(std::uint64_t manifest_hash);

/// Writes via a temporary file in the same directory plus an atomic rename,
/// so interrupted runs never leave half-written artifacts.
void write_file_atomic(const std::string& path, const std::string& body);

// --- typed loaders -------------------------------------------------------

/// Columns: slot, T_out_degC, then one P_sum_z<k>_kW column per zone.
void load_forecast_csv(const std::string& path, int zone_count,
                       model::ForecastSet& out);

/// Columns: slot, price_per_kWh. Fills forecast.price.
void load_price_csv(const std::string& path, model::ForecastSet& out);

/// Long format, columns: slot, <value column>. Every slot in [0,H) must
/// appear at least once; returns one history per slot.
std::vector<uncertainty::ErrorHistory> load_error_csv(const std::string& path,
                                                      int H,
                                                      const std::string& stream_id);

// --- artifact writers / readers ------------------------------------------

std::string schedule_csv(const std::vector<std::vector<int>>& x,
                         const std::vector<int>& house_ids,
                         std::uint64_t manifest_hash);
/// Inverse of schedule_csv; returns rows aligned with `house_ids` order.
std::vector<std::vector<int>> parse_schedule_csv(const CsvTable& table,
                                                 const std::vector<int>& house_ids);

std::string report_csv(const evaluation::EvaluationReport& report,
                       std::uint64_t manifest_hash);

std::string summary_text(const std::string& label,
                         const evaluation::EvaluationReport& report);

/// Per-slot plot data: prices, forecasts, scheduled heat-pump load and the
/// predicted transformer load of zone 0.
std::string plot_data_csv(const std::vector<std::vector<int>>& x,
                          const std::vector<thermal::HouseSpec>& houses,
                          const std::vector<model::ZoneSpec>& zones,
                          const model::ForecastSet& forecast,
                          std::uint64_t manifest_hash);

} // namespace hpdro::io
