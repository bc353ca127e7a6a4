// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>

#include "volume.hpp"

namespace gliomics {

// NIfTI-1 single-file volumes (.nii / .nii.gz), datatype codes 2 (uint8),
// 4 (int16) and 16 (float32). Spacing comes from pixdim[1..3]; the origin
// from the sform translation (or qoffset as a fallback); all other
// orientation information is ignored. Gzip is detected by content
// (0x1f 0x8b), not by file extension.

using VolumeVariant = std::variant<LabelVolume, IntensityVolume>;

// Integer-typed files whose values are all in {0,1,2,4} load as LabelVolume,
// anything else as IntensityVolume.
VolumeVariant read_volume(const std::string& path);

// Requires a label map; throws a validation error listing offending values.
LabelVolume read_label_volume(const std::string& path);

IntensityVolume read_intensity_volume(const std::string& path);

// Writes uint8 for labels, float32 for intensities. Paths ending in ".gz"
// are gzip-compressed; compression is deterministic (fixed header fields).
void write_volume(const LabelVolume& vol, const std::string& path);
void write_volume(const IntensityVolume& vol, const std::string& path);

}  // namespace gliomics
