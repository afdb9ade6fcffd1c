#ifndef UCG_DATASET_IO_HPP
#define UCG_DATASET_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "ucg/gaussian.hpp"

namespace ucg {

// CSV layout: one line per variable, its name first, then one value per instance.
std::string serialize_dataset(const Dataset& d);
Dataset parse_dataset(std::string_view text);
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& d, const std::filesystem::path& path);

}  // namespace ucg

#endif  // UCG_DATASET_IO_HPP
