// Copyright 2026 the gliomics authors
// SPDX-License-Identifier: Apache-2.0

#include "feature_names.hpp"

#include "morphology.hpp"
#include "texture.hpp"

namespace gliomics {

const std::vector<std::string>& canonical_feature_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names;
    names.reserve(kTotalFeatureCount);
    for (const char* roi : {"WT", "TC"}) {
      for (const std::string& n : MorphFeatures::names())
        names.push_back(std::string(roi) + "_" + n);
      for (const std::string& n : TextureFeatures::names())
        names.push_back(std::string(roi) + "_" + n);
    }
    names.push_back("RIC");
    return names;
  }();
  return kNames;
}

}  // namespace gliomics
