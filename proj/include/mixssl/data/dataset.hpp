#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mixssl/data/image.hpp"

namespace mixssl::data {

struct LabeledImage {
  ImageTensor image;
  std::optional<int> label;  // class index, absent for unlabeled use
};

struct Dataset {
  std::vector<LabeledImage> items;
  std::vector<std::string> class_names;

  int class_count() const { return static_cast<int>(class_names.size()); }
  int64_t size() const { return static_cast<int64_t>(items.size()); }
};

// Loads `<root>/<split>/<class_name>/<image files>`. Class indices follow
// sorted subdirectory names; items are ordered by file path. Undecodable
// files are skipped with a warning. Throws DataError if the split directory
// is missing or decodes to zero images.
Dataset load_dataset(const std::filesystem::path& root, const std::string& split);

// Writes the inverse layout as PNG files (items grouped by label, name
// `img_<index>.png`). Unlabeled items are rejected.
void write_dataset(const std::filesystem::path& root, const std::string& split,
                   const Dataset& dataset);

// Stable FNV-1a content hash over pixel bits and labels, for run manifests.
uint64_t dataset_content_hash(const Dataset& dataset);

}  // namespace mixssl::data
