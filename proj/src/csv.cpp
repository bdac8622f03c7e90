#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hpdro/config.hpp"
#include "hpdro/csv.hpp"
#include "hpdro/errors.hpp"

namespace hpdro::io {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& cell, const std::string& where) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    require(end == begin + cell.size() && !cell.empty(), ErrorCode::config,
            where + ": not a number: '" + cell + "'");
    return v;
}

long parse_long(const std::string& cell, const std::string& where) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    require(end == begin + cell.size() && !cell.empty(), ErrorCode::config,
            where + ": not an integer: '" + cell + "'");
    return v;
}

std::string cellref(const std::string& origin, std::size_t row) {
    return origin + " row " + std::to_string(row + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void expect_header(const CsvTable& t, const std::vector<std::string>& want,
                   const std::string& origin) {
    require(t.header == want, ErrorCode::config, [&] {
        std::string msg = origin + ": expected header '";
        for (std::size_t i = 0; i < want.size(); ++i)
            msg += (i ? "," : "") + want[i];
        msg += "', got '";
        for (std::size_t i = 0; i < t.header.size(); ++i)
            msg += (i ? "," : "") + t.header[i];
        return msg + "'";
    }());
}

} // namespace

CsvTable parse_csv(const std::string& text, const std::string& origin) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!have_header) {
            table.header = split_fields(t);
            have_header = true;
        } else {
            auto fields = split_fields(t);
            require(fields.size() == table.header.size(), ErrorCode::config,
                    origin + ": row with " + std::to_string(fields.size()) +
                        " fields under a " + std::to_string(table.header.size()) +
                        "-column header");
            table.rows.push_back(std::move(fields));
        }
    }
    require(have_header, ErrorCode::config, origin + ": no header row");
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    require(file.good(), ErrorCode::io, "cannot read " + path);
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse_csv(buf.str(), path);
}

std::string provenance_line(std::uint64_t manifest_hash) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "# hpdro %s manifest %016llx\n", kToolVersion,
                  static_cast<unsigned long long>(manifest_hash));
    return buf;
}

void write_file_atomic(const std::string& path, const std::string& body) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        require(file.good(), ErrorCode::io, "cannot open for writing: " + tmp);
        file.write(body.data(), static_cast<std::streamsize>(body.size()));
        file.flush();
        require(file.good(), ErrorCode::io, "write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    require(!ec, ErrorCode::io,
            "cannot move " + tmp + " into place: " + ec.message());
}

void load_forecast_csv(const std::string& path, int zone_count,
                       model::ForecastSet& out) {
    const CsvTable t = read_csv(path);
    std::vector<std::string> want{"slot", "T_out_degC"};
    for (int z = 0; z < zone_count; ++z)
        want.push_back("P_sum_z" + std::to_string(z) + "_kW");
    expect_header(t, want, path);
    const int H = static_cast<int>(t.rows.size());
    require(H >= 1, ErrorCode::config, path + ": no data rows");
    out.H = H;
    out.T_out_hat.assign(static_cast<std::size_t>(H), 0.0);
    out.P_sum_hat.assign(static_cast<std::size_t>(zone_count),
                         std::vector<double>(static_cast<std::size_t>(H), 0.0));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const long slot = parse_long(row[0], cellref(path, r));
        require(slot == static_cast<long>(r), ErrorCode::config,
                cellref(path, r) + ": slots must run 0.." +
                    std::to_string(H - 1) + " in order, got " +
                    std::to_string(slot));
        out.T_out_hat[r] = parse_double(row[1], cellref(path, r));
        for (int z = 0; z < zone_count; ++z)
            out.P_sum_hat[static_cast<std::size_t>(z)][r] =
                parse_double(row[static_cast<std::size_t>(2 + z)],
                             cellref(path, r));
    }
}

void load_price_csv(const std::string& path, model::ForecastSet& out) {
    const CsvTable t = read_csv(path);
    expect_header(t, {"slot", "price_per_kWh"}, path);
    require(static_cast<int>(t.rows.size()) == out.H, ErrorCode::config,
            path + ": " + std::to_string(t.rows.size()) +
                " rows but the forecast horizon is " + std::to_string(out.H));
    out.price.assign(static_cast<std::size_t>(out.H), 0.0);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const long slot = parse_long(t.rows[r][0], cellref(path, r));
        require(slot == static_cast<long>(r), ErrorCode::config,
                cellref(path, r) + ": slots must run in order");
        out.price[r] = parse_double(t.rows[r][1], cellref(path, r));
    }
}

std::vector<uncertainty::ErrorHistory> load_error_csv(
    const std::string& path, int H, const std::string& stream_id) {
    const CsvTable t = read_csv(path);
    require(t.header.size() == 2 && t.header[0] == "slot", ErrorCode::config,
            path + ": expected a two-column 'slot,<value>' header");
    std::vector<uncertainty::ErrorHistory> hist(static_cast<std::size_t>(H));
    for (int s = 0; s < H; ++s) {
        hist[static_cast<std::size_t>(s)].stream_id = stream_id;
        hist[static_cast<std::size_t>(s)].time_slot = s;
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const long slot = parse_long(t.rows[r][0], cellref(path, r));
        require(slot >= 0 && slot < H, ErrorCode::config,
                cellref(path, r) + ": slot " + std::to_string(slot) +
                    " outside horizon 0.." + std::to_string(H - 1));
        hist[static_cast<std::size_t>(slot)].samples.push_back(
            parse_double(t.rows[r][1], cellref(path, r)));
    }
    for (int s = 0; s < H; ++s)
        require(hist[static_cast<std::size_t>(s)].samples.size() >= 2,
                ErrorCode::config,
                path + ": slot " + std::to_string(s) +
                    " has fewer than 2 samples");
    return hist;
}

std::string schedule_csv(const std::vector<std::vector<int>>& x,
                         const std::vector<int>& house_ids,
                         std::uint64_t manifest_hash) {
    require(x.size() == house_ids.size(), ErrorCode::invalid_argument,
            "one schedule row per house id required");
    std::string out = provenance_line(manifest_hash);
    out += "house_id";
    const std::size_t H = x.empty() ? 0 : x.front().size();
    for (std::size_t t = 0; t < H; ++t) out += ",t" + std::to_string(t);
    out += '\n';
    for (std::size_t k = 0; k < x.size(); ++k) {
        require(x[k].size() == H, ErrorCode::invalid_argument,
                "ragged schedule matrix");
        out += std::to_string(house_ids[k]);
        for (const int bit : x[k]) out += bit ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

std::vector<std::vector<int>> parse_schedule_csv(
    const CsvTable& table, const std::vector<int>& house_ids) {
    require(!table.header.empty() && table.header[0] == "house_id",
            ErrorCode::config, "schedule: first column must be house_id");
    const std::size_t H = table.header.size() - 1;
    std::unordered_map<int, std::vector<int>> by_id;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const int id =
            static_cast<int>(parse_long(row[0], cellref("schedule", r)));
        std::vector<int> bits(H);
        for (std::size_t t = 0; t < H; ++t) {
            const long b = parse_long(row[t + 1], cellref("schedule", r));
            require(b == 0 || b == 1, ErrorCode::config,
                    cellref("schedule", r) + ": entries must be 0 or 1");
            bits[t] = static_cast<int>(b);
        }
        const bool fresh = by_id.emplace(id, std::move(bits)).second;
        require(fresh, ErrorCode::config,
                "schedule: duplicate house id " + std::to_string(id));
    }
    std::vector<std::vector<int>> x;
    x.reserve(house_ids.size());
    for (const int id : house_ids) {
        const auto it = by_id.find(id);
        require(it != by_id.end(), ErrorCode::config,
                "schedule: missing house id " + std::to_string(id));
        x.push_back(it->second);
    }
    return x;
}

std::string report_csv(const evaluation::EvaluationReport& report,
                       std::uint64_t manifest_hash) {
    std::string out = provenance_line(manifest_hash);
    out += "trial,p_max_kW,peak_cost,elec_cost,comfort_rate\n";
    for (int i = 0; i < report.trials; ++i) {
        const std::size_t s = static_cast<std::size_t>(i);
        out += std::to_string(i) + ',' + fmt(report.p_max[s]) + ',' +
               fmt(report.peak_cost[s]) + ',' + fmt(report.elec_cost[s]) + ',' +
               fmt(report.comfort[s]) + '\n';
    }
    return out;
}

std::string summary_text(const std::string& label,
                         const evaluation::EvaluationReport& report) {
    auto line = [](const char* name, const evaluation::Summary& s) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "  %-14s %12.6g %12.6g %12.6g\n", name,
                      s.min, s.mean, s.max);
        return std::string(buf);
    };
    std::string out = "[" + label + "]  trials=" + std::to_string(report.trials) +
                      "\n";
    char head[120];
    std::snprintf(head, sizeof head, "  %-14s %12s %12s %12s\n", "metric", "min",
                  "mean", "max");
    out += head;
    out += line("p_max_kW", report.p_max_summary);
    out += line("peak_cost", report.peak_cost_summary);
    out += line("elec_cost", report.elec_cost_summary);
    out += line("comfort_rate", report.comfort_summary);
    return out;
}

std::string plot_data_csv(const std::vector<std::vector<int>>& x,
                          const std::vector<thermal::HouseSpec>& houses,
                          const std::vector<model::ZoneSpec>& zones,
                          const model::ForecastSet& forecast,
                          std::uint64_t manifest_hash) {
    require(!zones.empty(), ErrorCode::invalid_argument, "no zones");
    require(x.size() == houses.size(), ErrorCode::invalid_argument,
            "one schedule row per house required");
    std::string out = provenance_line(manifest_hash);
    out += "slot,price_per_kWh,T_out_degC,P_sum_z0_kW,hp_load_kW,pred_load_z0_kW\n";
    std::unordered_map<int, std::size_t> pos;
    for (std::size_t k = 0; k < houses.size(); ++k) pos.emplace(houses[k].id, k);
    for (int t = 0; t < forecast.H; ++t) {
        const std::size_t ts = static_cast<std::size_t>(t);
        double hp = 0.0;
        for (std::size_t k = 0; k < houses.size(); ++k)
            hp += x[k][ts] * houses[k].P_hp;
        double z0 = forecast.P_sum_hat[0][ts];
        for (const int id : zones[0].houses) {
            const auto it = pos.find(id);
            require(it != pos.end(), ErrorCode::config,
                    "zone references unknown house id " + std::to_string(id));
            z0 += x[it->second][ts] * houses[it->second].P_hp;
        }
        out += std::to_string(t) + ',' + fmt(forecast.price[ts]) + ',' +
               fmt(forecast.T_out_hat[ts]) + ',' + fmt(forecast.P_sum_hat[0][ts]) +
               ',' + fmt(hp) + ',' + fmt(z0) + '\n';
    }
    return out;
}

} // namespace hpdro::io
