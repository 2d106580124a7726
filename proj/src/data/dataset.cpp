#include "mixssl/data/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <map>

#include "mixssl/core/errors.hpp"
#include "mixssl/core/log.hpp"
#include "mixssl/data/image_io.hpp"

namespace fs = std::filesystem;

namespace mixssl::data {

Dataset load_dataset(const fs::path& root, const std::string& split) {
  const fs::path split_dir = root / split;
  if (!fs::is_directory(split_dir)) {
    throw DataError("dataset split directory not found: " + split_dir.string());
  }

  std::vector<std::string> class_names;
  for (const auto& entry : fs::directory_iterator(split_dir)) {
    if (entry.is_directory()) class_names.push_back(entry.path().filename().string());
  }
  std::sort(class_names.begin(), class_names.end());

  Dataset dataset;
  dataset.class_names = class_names;
  for (size_t ci = 0; ci < class_names.size(); ++ci) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(split_dir / class_names[ci])) {
      if (entry.is_regular_file() && is_supported_image_file(entry.path())) {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      try {
        LabeledImage item{read_image(file), static_cast<int>(ci)};
        dataset.items.push_back(std::move(item));
      } catch (const DataError& e) {
        log_warn(std::string("skipping undecodable image: ") + e.what());
      }
    }
  }
  if (dataset.items.empty()) {
    throw DataError("dataset split is empty: " + split_dir.string());
  }
  return dataset;
}

void write_dataset(const fs::path& root, const std::string& split, const Dataset& dataset) {
  const fs::path split_dir = root / split;
  std::map<int, int64_t> counters;
  for (size_t i = 0; i < dataset.items.size(); ++i) {
    const LabeledImage& item = dataset.items[i];
    if (!item.label.has_value()) throw InvalidInput("write_dataset requires labeled items");
    const int label = *item.label;
    if (label < 0 || label >= dataset.class_count()) {
      throw InvalidInput("label out of range in write_dataset");
    }
    const fs::path dir = split_dir / dataset.class_names[static_cast<size_t>(label)];
    fs::create_directories(dir);
    char name[32];
    std::snprintf(name, sizeof(name), "img_%05lld.png",
                  static_cast<long long>(counters[label]++));
    write_png(dir / name, item.image);
  }
}

uint64_t dataset_content_hash(const Dataset& dataset) {
  uint64_t h = 1469598103934665603ULL;
  auto mix_byte = [&h](uint8_t b) {
    h ^= b;
    h *= 1099511628211ULL;
  };
  auto mix_u32 = [&mix_byte](uint32_t v) {
    mix_byte(static_cast<uint8_t>(v));
    mix_byte(static_cast<uint8_t>(v >> 8));
    mix_byte(static_cast<uint8_t>(v >> 16));
    mix_byte(static_cast<uint8_t>(v >> 24));
  };
  for (const auto& name : dataset.class_names) {
    for (char c : name) mix_byte(static_cast<uint8_t>(c));
    mix_byte(0);
  }
  for (const auto& item : dataset.items) {
    mix_u32(static_cast<uint32_t>(item.label.value_or(-1)));
    const TensorF& px = item.image.pixels();
    for (int64_t i = 0; i < px.numel(); ++i) {
      mix_u32(std::bit_cast<uint32_t>(px[i]));
    }
  }
  return h;
}

}  // namespace mixssl::data
