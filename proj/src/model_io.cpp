#include "ucg/model_io.hpp"

#include "ucg/error.hpp"
#include "ucg/graph_io.hpp"

namespace ucg {

using nlohmann::json;

namespace {

std::vector<std::string> names(const Ucg& g, const Indices& idx) {
    std::vector<std::string> out;
    for (auto v : idx) out.push_back(g.name(v));
    return out;
}

Indices indices(const Ucg& g, const json& j, const char* what) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(what) + " must be an array of names");
    Indices out;
    for (const auto& n : j) {
        const auto name = n.get<std::string>();
        if (!g.has_node(name)) throw Error(ErrorCode::UnknownNode, "unknown node '" + name + "' in " + what);
        out.push_back(g.index_of(name));
    }
    return out;
}

Matrix read_matrix(const json& j, const std::vector<std::string>& rows, const std::vector<std::string>& cols,
                   const char* what) {
    if (!j.is_object() || !j.contains("values"))
        throw Error(ErrorCode::ParseError, std::string(what) + " must be a labelled matrix");
    const auto file_rows = j.value("rows", std::vector<std::string>{});
    const auto file_cols = j.value("cols", std::vector<std::string>{});
    const auto& values = j.at("values");
    if (file_rows.size() != rows.size() || file_cols.size() != cols.size() || values.size() != rows.size())
        throw Error(ErrorCode::ParseError, std::string(what) + " has the wrong shape");
    const auto find = [&](const std::vector<std::string>& list, const std::string& name) {
        const auto it = std::find(list.begin(), list.end(), name);
        if (it == list.end()) throw Error(ErrorCode::ParseError, std::string(what) + " has unexpected label '" + name + "'");
        return static_cast<Eigen::Index>(it - list.begin());
    };
    Matrix out(rows.size(), cols.size());
    for (std::size_t r = 0; r < file_rows.size(); ++r) {
        if (values[r].size() != cols.size()) throw Error(ErrorCode::ParseError, std::string(what) + " has a ragged row");
        const auto rr = find(rows, file_rows[r]);
        for (std::size_t c = 0; c < file_cols.size(); ++c) out(rr, find(cols, file_cols[c])) = values[r][c].get<double>();
    }
    return out;
}

}  // namespace

json labelled_matrix(const Matrix& a, const std::vector<std::string>& rows, const std::vector<std::string>& cols) {
    json values = json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
        values.push_back(row);
    }
    return {{"rows", rows}, {"cols", cols}, {"values", values}};
}

json model_to_json(const UcgModel& m) {
    const Ucg& g = m.graph;
    json comps = json::array();
    for (const ComponentParams& cp : m.components) {
        const auto k = names(g, cp.k), mo = names(g, cp.mo), fa = names(g, cp.fa);
        comps.push_back({{"k", k},
                         {"mothers", mo},
                         {"fathers", fa},
                         {"beta_mo", labelled_matrix(cp.beta_mo, k, mo)},
                         {"omega_kk", labelled_matrix(cp.omega_kk, k, k)},
                         {"omega_kfa", labelled_matrix(cp.omega_kfa, k, fa)},
                         {"beta_fa", labelled_matrix(cp.beta_fa(), k, fa)}});
    }
    json j = {{"graph", graph_to_json(g)}, {"components", comps}};
    if (m.root) {
        const auto nodes = names(g, m.root->nodes);
        j["root"] = {{"nodes", nodes}, {"precision", labelled_matrix(m.root->precision, nodes, nodes)}};
    }
    return j;
}

UcgModel model_from_json(const json& j) {
    try {
        UcgModel m;
        m.graph = graph_from_json(j.at("graph"));
        const Ucg& g = m.graph;
        if (j.contains("root") && !j.at("root").is_null()) {
            RootBlock root;
            root.nodes = indices(g, j.at("root").at("nodes"), "root nodes");
            const auto nodes = names(g, root.nodes);
            root.precision = read_matrix(j.at("root").at("precision"), nodes, nodes, "root precision");
            m.root = std::move(root);
        }
        for (const auto& c : j.at("components")) {
            ComponentParams cp;
            cp.k = indices(g, c.at("k"), "k");
            cp.mo = indices(g, c.value("mothers", json::array()), "mothers");
            cp.fa = indices(g, c.value("fathers", json::array()), "fathers");
            const auto k = names(g, cp.k), mo = names(g, cp.mo), fa = names(g, cp.fa);
            cp.beta_mo = read_matrix(c.at("beta_mo"), k, mo, "beta_mo");
            cp.omega_kk = read_matrix(c.at("omega_kk"), k, k, "omega_kk");
            cp.omega_kfa = read_matrix(c.at("omega_kfa"), k, fa, "omega_kfa");
            // Stored matrices follow label order in the file; normalise to sorted indices.
            Indices ok = cp.k, omo = cp.mo, ofa = cp.fa;
            std::sort(cp.k.begin(), cp.k.end());
            std::sort(cp.mo.begin(), cp.mo.end());
            std::sort(cp.fa.begin(), cp.fa.end());
            const auto perm = [](const Indices& from, const Indices& to) {
                Indices p;
                for (auto v : to) p.push_back(static_cast<std::size_t>(std::find(from.begin(), from.end(), v) - from.begin()));
                return p;
            };
            cp.beta_mo = submatrix(cp.beta_mo, perm(ok, cp.k), perm(omo, cp.mo));
            cp.omega_kk = submatrix(cp.omega_kk, perm(ok, cp.k), perm(ok, cp.k));
            cp.omega_kfa = submatrix(cp.omega_kfa, perm(ok, cp.k), perm(ofa, cp.fa));
            m.components.push_back(std::move(cp));
        }
        validate_model(m);
        return m;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

std::string serialize_model(const UcgModel& m) { return model_to_json(m).dump(2) + "\n"; }

UcgModel parse_model(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return model_from_json(j);
}

UcgModel load_model(const std::filesystem::path& path) { return parse_model(read_text_file(path)); }

void save_model(const UcgModel& m, const std::filesystem::path& path) { write_text_file(path, serialize_model(m)); }

json gaussian_to_json(const JointGaussian& jg) {
    json mean = json::array();
    for (Eigen::Index i = 0; i < jg.mean().size(); ++i) mean.push_back(jg.mean()(i));
    return {{"variables", jg.variables()}, {"mean", mean}, {"sigma", labelled_matrix(jg.sigma(), jg.variables(), jg.variables())}};
}

}  // namespace ucg
