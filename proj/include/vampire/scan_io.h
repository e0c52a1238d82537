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


#ifndef VAMPIRE_SCAN_IO_H
#define VAMPIRE_SCAN_IO_H

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "vampire/analysis.h"
#include "vampire/montecarlo.h"
#include "vampire/verify.h"

namespace vampire {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Shortest round-tripping decimal form.
std::string format_number(double value);

/// "key=value" lines; blank lines and lines starting with '#' are skipped.
void write_key_values(const std::filesystem::path &path, const KeyValues &values);
KeyValues read_key_values(const std::filesystem::path &path);

/// scan.csv -> scan.config
std::filesystem::path sidecar_path(const std::filesystem::path &csv_path);

/// Writes the per-superpixel CSV and the config echo next to it.
void write_scan_csv(const std::filesystem::path &path, const ScanResult &result);
/// Reads a scan CSV, plus its sidecar when one exists.
ScanResult read_scan_csv(const std::filesystem::path &path);

void write_ratio_csv(const std::filesystem::path &path, const RatioMap &map);
void write_verify_csv(const std::filesystem::path &path, const std::vector<VerifyRow> &rows);

}  // namespace vampire

#endif  // VAMPIRE_SCAN_IO_H
