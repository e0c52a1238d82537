// Copyright 2026 The Vampire Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "vampire/scan_io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vampire/error.h"

namespace vampire {

namespace {

constexpr const char *kScanHeader = "row,col,n_bins,camera_counts,herald_counts,coincidence_counts";

std::ofstream open_out(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::int64_t parse_int(const std::string &field, const std::filesystem::path &path, int line) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        std::ostringstream os;
        os << path.string() << ":" << line << ": expected an integer, got '" << field << "'";
        throw Error(ErrorCode::kParseError, os.str());
    }
    return value;
}

}  // namespace

std::string format_number(double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_key_values(const std::filesystem::path &path, const KeyValues &values) {
    std::ofstream out = open_out(path);
    for (const auto &[key, value] : values) {
        out << key << '=' << value << '\n';
    }
}

KeyValues read_key_values(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIoError, "cannot read " + path.string());
    }
    KeyValues values;
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::ostringstream os;
            os << path.string() << ":" << n << ": expected key=value";
            throw Error(ErrorCode::kParseError, os.str());
        }
        values.emplace_back(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
    return values;
}

std::filesystem::path sidecar_path(const std::filesystem::path &csv_path) {
    std::filesystem::path p = csv_path;
    return p.replace_extension(".config");
}

void write_scan_csv(const std::filesystem::path &path, const ScanResult &result) {
    {
        std::ofstream out = open_out(path);
        out << kScanHeader << '\n';
        for (const SuperpixelCounts &c : result.records) {
            out << c.row << ',' << c.col << ',' << c.n_bins << ',' << c.camera_counts << ',' << c.herald_counts << ','
                << c.coincidence_counts << '\n';
        }
        if (!out) {
            throw Error(ErrorCode::kIoError, "failed writing " + path.string());
        }
    }
    write_key_values(sidecar_path(path), result.config_echo);
}

ScanResult read_scan_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIoError, "cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || trim(line) != kScanHeader) {
        throw Error(ErrorCode::kParseError, path.string() + ": expected header '" + kScanHeader + "'");
    }
    ScanResult result{0, 0, {}, {}, TriggerMode::kCoincidence};
    for (int n = 2; std::getline(in, line); ++n) {
        if (trim(line).empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) {
            fields.push_back(trim(f));
        }
        if (fields.size() != 6) {
            std::ostringstream os;
            os << path.string() << ":" << n << ": expected 6 fields, got " << fields.size();
            throw Error(ErrorCode::kParseError, os.str());
        }
        SuperpixelCounts c{static_cast<int>(parse_int(fields[0], path, n)), static_cast<int>(parse_int(fields[1], path, n)),
                           parse_int(fields[2], path, n), parse_int(fields[3], path, n), parse_int(fields[4], path, n),
                           parse_int(fields[5], path, n)};
        if (c.row < 0 || c.col < 0 || c.n_bins < 0 || c.camera_counts < 0 || c.herald_counts < 0 ||
            c.coincidence_counts < 0) {
            std::ostringstream os;
            os << path.string() << ":" << n << ": negative value";
            throw Error(ErrorCode::kParseError, os.str());
        }
        result.rows = std::max(result.rows, c.row + 1);
        result.cols = std::max(result.cols, c.col + 1);
        result.records.push_back(c);
    }
    if (result.records.size() != static_cast<size_t>(result.rows) * result.cols) {
        throw Error(ErrorCode::kParseError, path.string() + ": superpixel grid is incomplete");
    }
    std::vector<SuperpixelCounts> ordered(result.records.size(), SuperpixelCounts{-1, -1, 0, 0, 0, 0});
    for (const SuperpixelCounts &c : result.records) {
        SuperpixelCounts &slot = ordered[static_cast<size_t>(c.row) * result.cols + c.col];
        if (slot.row >= 0) {
            throw Error(ErrorCode::kParseError, path.string() + ": duplicate superpixel");
        }
        slot = c;
    }
    result.records = std::move(ordered);

    const auto sidecar = sidecar_path(path);
    if (std::filesystem::exists(sidecar)) {
        result.config_echo = read_key_values(sidecar);
        for (const auto &[key, value] : result.config_echo) {
            if (key == "scan.trigger_mode") {
                result.trigger_mode = parse_trigger_mode(value);
            }
        }
    }
    return result;
}

void write_ratio_csv(const std::filesystem::path &path, const RatioMap &map) {
    std::ofstream out = open_out(path);
    out << "row,col,ratio,sigma,region,exclusion\n";
    for (int r = 0; r < map.rows; ++r) {
        for (int c = 0; c < map.cols; ++c) {
            const RatioEntry &e = map.at(r, c);
            out << r << ',' << c << ',' << format_number(e.ratio) << ',' << format_number(e.sigma) << ','
                << region_tag_name(e.tag) << ',' << exclusion_name(e.exclusion) << '\n';
        }
    }
}

void write_verify_csv(const std::filesystem::path &path, const std::vector<VerifyRow> &rows) {
    std::ofstream out = open_out(path);
    out << "state,c_A,r,herald_model,fidelity,herald_prob,complement_population\n";
    for (const VerifyRow &row : rows) {
        out << row.state << ',' << format_number(row.c_a) << ',' << format_number(row.r) << ','
            << herald_model_name(row.herald_model) << ',' << format_number(row.fidelity) << ','
            << format_number(row.herald_prob) << ',' << format_number(row.complement_population) << '\n';
    }
}

}  // namespace vampire
