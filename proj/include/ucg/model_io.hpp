#ifndef UCG_MODEL_IO_HPP
#define UCG_MODEL_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ucg/gaussian.hpp"
#include "ucg/model.hpp"

namespace ucg {

/// {"rows": [names], "cols": [names], "values": [[...], ...]} with zeros written out.
nlohmann::json labelled_matrix(const Matrix& a, const std::vector<std::string>& rows,
                               const std::vector<std::string>& cols);

nlohmann::json model_to_json(const UcgModel& m);
/// Reorders rows and columns by label and validates against the graph's masks.
UcgModel model_from_json(const nlohmann::json& j);
std::string serialize_model(const UcgModel& m);
UcgModel parse_model(std::string_view text);
UcgModel load_model(const std::filesystem::path& path);
void save_model(const UcgModel& m, const std::filesystem::path& path);

/// {"variables": [...], "mean": [...], "sigma": labelled matrix}.
nlohmann::json gaussian_to_json(const JointGaussian& jg);

}  // namespace ucg

#endif  // UCG_MODEL_IO_HPP
