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

#ifndef VAMPIRE_GRID_IO_H
#define VAMPIRE_GRID_IO_H

#include <filesystem>

#include "vampire/spatial.h"

namespace vampire {

/// Matrix CSV: first line "<width>,<height>", then `height` rows of `width`
/// comma-separated values, row-major.
void write_matrix_csv(const std::filesystem::path &path, const PixelMap &map);
PixelMap read_matrix_csv(const std::filesystem::path &path);

/// 8-bit binary PGM (P5). Values are mapped linearly so that `full_scale`
/// becomes 255, then clamped.
void write_pgm(const std::filesystem::path &path, const PixelMap &map, double full_scale);
/// Returns values in [0, 1] (raw / 255).
PixelMap read_pgm(const std::filesystem::path &path);

/// Mask transmission as PGM, 255 = t of 1.0.
inline void write_mask_pgm(const std::filesystem::path &path, const MaskSpec &mask) {
    write_pgm(path, mask.transmission(), 1.0);
}

}  // namespace vampire

#endif  // VAMPIRE_GRID_IO_H
