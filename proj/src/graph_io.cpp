#include "ucg/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "ucg/error.hpp"

namespace ucg {

nlohmann::json graph_to_json(const Ucg& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : g.edges())
        edges.push_back({{"from", g.name(e.from)}, {"to", g.name(e.to)}, {"kind", std::string(to_string(e.kind))}});
    return {{"nodes", g.nodes()}, {"edges", edges}};
}

Ucg graph_from_json(const nlohmann::json& j, Validation validation) {
    if (!j.is_object() || !j.contains("nodes") || !j.at("nodes").is_array())
        throw Error(ErrorCode::ParseError, "graph needs a \"nodes\" array");
    std::vector<std::string> nodes;
    for (const auto& n : j.at("nodes")) {
        if (!n.is_string()) throw Error(ErrorCode::ParseError, "node names must be strings");
        nodes.push_back(n.get<std::string>());
    }
    std::vector<EdgeSpec> edges;
    if (j.contains("edges")) {
        if (!j.at("edges").is_array()) throw Error(ErrorCode::ParseError, "\"edges\" must be an array");
        for (const auto& e : j.at("edges")) {
            if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e.contains("kind"))
                throw Error(ErrorCode::ParseError, "edge entries need from, to and kind");
            const auto kind_text = e.at("kind").get<std::string>();
            const auto kind = edge_kind_from_string(kind_text);
            if (!kind) throw Error(ErrorCode::ParseError, "unknown edge kind '" + kind_text + "'");
            edges.push_back({e.at("from").get<std::string>(), e.at("to").get<std::string>(), *kind});
        }
    }
    return build_ucg(nodes, edges, validation);
}

std::string serialize_graph(const Ucg& g) { return graph_to_json(g).dump(2) + "\n"; }

Ucg parse_graph(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, ex.what());
    }
    try {
        return graph_from_json(j);
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::ParseError, ex.what());
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << text;
}

Ucg load_graph(const std::filesystem::path& path) { return parse_graph(read_text_file(path)); }

void save_graph(const Ucg& g, const std::filesystem::path& path) { write_text_file(path, serialize_graph(g)); }

}  // namespace ucg
