#ifndef UCG_GRAPH_IO_HPP
#define UCG_GRAPH_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ucg/graph.hpp"

namespace ucg {

// {"nodes": [...], "edges": [{"from": .., "to": .., "kind": "undirected"|"solid_directed"|"dashed_directed"}]}
nlohmann::json graph_to_json(const Ucg& g);
Ucg graph_from_json(const nlohmann::json& j, Validation validation = Validation::Full);

/// Canonical text form: node order as built, edges sorted by (from, to) index.
std::string serialize_graph(const Ucg& g);
Ucg parse_graph(std::string_view text);

Ucg load_graph(const std::filesystem::path& path);
void save_graph(const Ucg& g, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ucg

#endif  // UCG_GRAPH_IO_HPP
