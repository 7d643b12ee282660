#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "advlab/dataset.hpp"
#include "advlab/model.hpp"

namespace advlab {

/// Model and dataset files are single JSON objects with shortest
/// round-trip decimal numbers, so double precision survives save/load
/// exactly. Loaders are strict: unknown or missing keys are schema
/// violations, not warnings.

std::string model_to_text(const Model& m);
Model model_from_text(const std::string& text);
void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

std::string dataset_to_text(const LabeledDataset& data);
LabeledDataset dataset_from_text(const std::string& text);
void save_dataset(const LabeledDataset& data, const std::filesystem::path& path);
LabeledDataset load_dataset(const std::filesystem::path& path);

std::string image_to_text(const Image& img);
Image image_from_text(const std::string& text);
void save_image(const Image& img, const std::filesystem::path& path);
Image load_image(const std::filesystem::path& path);

/// Whole-file read/write with io_error on failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// FNV-1a over the file bytes; the checksum gen-data prints.
std::uint64_t file_checksum(const std::filesystem::path& path);

}  // namespace advlab
