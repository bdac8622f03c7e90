#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "hpdro/milp.hpp"
#include "hpdro/rng.hpp"

namespace hpdro::milp {

namespace {

using model::MilpInstance;
using model::Relation;

std::string sanitize(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (const char c : raw)
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            out.push_back(c);
    if (out.empty()) out = "r";
    return out;
}

/// MPS names are capped at 8 characters. Long tags keep a 4-character prefix
/// for readability and get a 4-hex-digit content hash; collisions re-hash
/// with a counter, so the mapping is a pure function of the tag sequence.
class NameTable {
public:
    std::string assign(const std::string& raw) {
        const std::string s = sanitize(raw);
        if (s.size() <= 8 && used_.insert(s).second) return s;
        const std::string prefix = s.substr(0, 4);
        for (int counter = 0;; ++counter) {
            std::string key = raw;
            if (counter > 0) key += "#" + std::to_string(counter);
            const std::uint64_t h = RandomStream::fnv1a64(key) & 0xFFFFu;
            char buf[16];
            std::snprintf(buf, sizeof buf, "%s%04llx", prefix.c_str(),
                          static_cast<unsigned long long>(h));
            if (used_.insert(buf).second) return buf;
        }
    }

private:
    std::unordered_set<std::string> used_{"COST", "RHS", "BND"};
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

} // namespace

std::string mps_string(const MilpInstance& instance) {
    require(instance.num_vars() > 0, ErrorCode::invalid_argument,
            "cannot export an empty model");
    const int nvars = instance.num_vars();

    NameTable row_names;
    NameTable col_names;
    std::vector<std::string> rname;
    rname.reserve(instance.rows.size());
    for (const auto& row : instance.rows) rname.push_back(row_names.assign(row.tag));
    std::vector<std::string> cname;
    cname.reserve(static_cast<std::size_t>(nvars));
    for (const auto& name : instance.var_names) cname.push_back(col_names.assign(name));

    // column-major view of the row coefficients
    std::vector<std::vector<std::pair<int, double>>> col_entries(
        static_cast<std::size_t>(nvars));
    for (std::size_t r = 0; r < instance.rows.size(); ++r)
        for (const auto& [idx, coeff] : instance.rows[r].terms)
            col_entries[static_cast<std::size_t>(idx)].emplace_back(
                static_cast<int>(r), coeff);

    std::string out;
    out.reserve(64 * (instance.rows.size() + static_cast<std::size_t>(nvars)));
    out += "NAME          HPDRO\n";
    out += "ROWS\n";
    out += " N  COST\n";
    for (std::size_t r = 0; r < instance.rows.size(); ++r) {
        switch (instance.rows[r].rel) {
        case Relation::le: out += " L  "; break;
        case Relation::ge: out += " G  "; break;
        case Relation::eq: out += " E  "; break;
        }
        out += rname[r];
        out += '\n';
    }

    out += "COLUMNS\n";
    bool in_integer_block = false;
    int marker_count = 0;
    for (int j = 0; j < nvars; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        if (instance.is_binary[s] != in_integer_block) {
            char buf[80];
            std::snprintf(buf, sizeof buf,
                          "    MARKER%d                 'MARKER'                 "
                          "'%s'\n",
                          marker_count++, in_integer_block ? "INTEND" : "INTORG");
            out += buf;
            in_integer_block = instance.is_binary[s];
        }
        if (instance.objective[s] != 0.0)
            out += "    " + pad(cname[s], 10) + pad("COST", 10) +
                   num(instance.objective[s]) + "\n";
        for (const auto& [r, coeff] : col_entries[s])
            out += "    " + pad(cname[s], 10) +
                   pad(rname[static_cast<std::size_t>(r)], 10) + num(coeff) +
                   "\n";
    }
    if (in_integer_block) {
        char buf[80];
        std::snprintf(buf, sizeof buf,
                      "    MARKER%d                 'MARKER'                 "
                      "'INTEND'\n",
                      marker_count++);
        out += buf;
    }

    out += "RHS\n";
    for (std::size_t r = 0; r < instance.rows.size(); ++r)
        if (instance.rows[r].rhs != 0.0)
            out += "    " + pad("RHS", 10) + pad(rname[r], 10) +
                   num(instance.rows[r].rhs) + "\n";

    out += "BOUNDS\n";
    for (int j = 0; j < nvars; ++j) {
        const std::size_t s = static_cast<std::size_t>(j);
        const double lo = instance.var_lower[s];
        const double hi = instance.var_upper[s];
        if (lo == hi) {
            out += " FX " + pad("BND", 10) + pad(cname[s], 10) + num(lo) + "\n";
        } else if (instance.is_binary[s]) {
            out += " BV " + pad("BND", 10) + cname[s] + "\n";
        } else {
            if (lo != 0.0)
                out += " LO " + pad("BND", 10) + pad(cname[s], 10) + num(lo) +
                       "\n";
            if (hi != std::numeric_limits<double>::infinity())
                out += " UP " + pad("BND", 10) + pad(cname[s], 10) + num(hi) +
                       "\n";
        }
    }
    out += "ENDATA\n";
    return out;
}

void export_mps(const MilpInstance& instance, const std::string& path) {
    const std::string body = mps_string(instance);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    require(file.good(), ErrorCode::io, "cannot open for writing: " + path);
    file.write(body.data(), static_cast<std::streamsize>(body.size()));
    file.flush();
    require(file.good(), ErrorCode::io, "write failed: " + path);
}

} // namespace hpdro::milp
