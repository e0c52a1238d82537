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

#include "vampire/grid_io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vampire/error.h"

namespace vampire {
namespace {

std::string format_double(double value) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, end);
}

double parse_double(const std::string &text, const std::filesystem::path &path) {
    double value = 0.0;
    const char *first = text.data();
    const char *last = first + text.size();
    while (first < last && *first == ' ') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::kParseError, path.string() + ": cannot parse number '" + text + "'");
    }
    return value;
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, sep)) {
        if (!cell.empty() && cell.back() == '\r') {
            cell.pop_back();
        }
        out.push_back(cell);
    }
    return out;
}

}  // namespace

void write_matrix_csv(const std::filesystem::path &path, const PixelMap &map) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    }
    out << map.cols() << ',' << map.rows() << '\n';
    for (Eigen::Index y = 0; y < map.rows(); ++y) {
        for (Eigen::Index x = 0; x < map.cols(); ++x) {
            if (x > 0) {
                out << ',';
            }
            out << format_double(map(y, x));
        }
        out << '\n';
    }
}

PixelMap read_matrix_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIoError, "cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::kParseError, path.string() + ": missing header");
    }
    const auto header = split(line, ',');
    if (header.size() != 2) {
        throw Error(ErrorCode::kParseError, path.string() + ": header must be 'width,height'");
    }
    const double w = parse_double(header[0], path);
    const double h = parse_double(header[1], path);
    if (w < 1 || h < 1 || w != std::floor(w) || h != std::floor(h)) {
        throw Error(ErrorCode::kParseError, path.string() + ": bad grid size");
    }
    PixelMap map(static_cast<int>(h), static_cast<int>(w));
    for (int y = 0; y < map.rows(); ++y) {
        if (!std::getline(in, line)) {
            throw Error(ErrorCode::kParseError, path.string() + ": expected " + std::to_string(map.rows()) + " rows");
        }
        const auto cells = split(line, ',');
        if (static_cast<int>(cells.size()) != map.cols()) {
            throw Error(ErrorCode::kParseError, path.string() + ": row " + std::to_string(y) + " has " +
                                                    std::to_string(cells.size()) + " values");
        }
        for (int x = 0; x < map.cols(); ++x) {
            map(y, x) = parse_double(cells[x], path);
        }
    }
    return map;
}

void write_pgm(const std::filesystem::path &path, const PixelMap &map, double full_scale) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    }
    out << "P5\n" << map.cols() << ' ' << map.rows() << "\n255\n";
    const double scale = full_scale > 0 ? 255.0 / full_scale : 0.0;
    for (Eigen::Index y = 0; y < map.rows(); ++y) {
        for (Eigen::Index x = 0; x < map.cols(); ++x) {
            const double v = std::clamp(std::round(map(y, x) * scale), 0.0, 255.0);
            out.put(static_cast<char>(static_cast<unsigned char>(v)));
        }
    }
}

PixelMap read_pgm(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::kIoError, "cannot read " + path.string());
    }
    auto next_token = [&]() {
        std::string token;
        char c;
        while (in.get(c)) {
            if (c == '#') {
                std::string comment;
                std::getline(in, comment);
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                if (!token.empty()) {
                    break;
                }
                continue;
            }
            token.push_back(c);
        }
        return token;
    };
    if (next_token() != "P5") {
        throw Error(ErrorCode::kParseError, path.string() + ": not a binary PGM");
    }
    const int w = std::stoi(next_token());
    const int h = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (w < 1 || h < 1 || maxval != 255) {
        throw Error(ErrorCode::kParseError, path.string() + ": only 8-bit PGM is supported");
    }
    PixelMap map(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            char c;
            if (!in.get(c)) {
                throw Error(ErrorCode::kParseError, path.string() + ": truncated pixel data");
            }
            map(y, x) = static_cast<unsigned char>(c) / 255.0;
        }
    }
    return map;
}

}  // namespace vampire
