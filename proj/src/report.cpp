#include "igeo/report.hpp"

#include <sstream>

namespace igeo::report {

using nlohmann::json;

json vector_json(const Vector& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json matrix_json(const Matrix& m) {
    json out = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(row);
    }
    return out;
}

json tensor_json(const Tensor3& t) {
    json out = json::array();
    for (int i = 0; i < t.dim(); ++i) {
        json plane = json::array();
        for (int j = 0; j < t.dim(); ++j) {
            json row = json::array();
            for (int k = 0; k < t.dim(); ++k) row.push_back(t(i, j, k));
            plane.push_back(row);
        }
        out.push_back(plane);
    }
    return out;
}

json family_json(const ModelFamily& f) {
    return json{{"name", f.name},
                {"dim", f.dim},
                {"flat_structure", to_string(f.flat_structure)},
                {"reference", vector_json(f.reference)}};
}

json snapshot_json(const GeometrySnapshot& s) {
    json out{{"source", s.source},
             {"metric", matrix_json(s.metric.g)},
             {"metric_asymmetry", s.metric.asymmetry},
             {"gamma_first_kind", tensor_json(s.gamma.gamma)},
             {"gamma_dual_first_kind", tensor_json(s.gamma_dual.gamma)},
             {"dual_compatibility_residual", s.dual_compat_residual}};
    if (s.c_tensor) out["c_tensor"] = tensor_json(*s.c_tensor);
    return out;
}

json checks_json(const std::vector<verify::Check>& checks) {
    json out = json::array();
    for (const auto& c : checks) {
        json row{{"suite", c.suite},
                 {"name", c.name},
                 {"residual", c.residual},
                 {"tolerance", c.tolerance},
                 {"comparison", c.comparison},
                 {"pass", c.pass}};
        if (!c.note.empty()) row["note"] = c.note;
        out.push_back(row);
    }
    return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string to_csv(const json& results) {
    // Flatten each result row into scalar columns; arrays expand by index.
    std::vector<std::string> columns;
    std::vector<std::map<std::string, std::string>> rows;

    std::function<void(const std::string&, const json&, std::map<std::string, std::string>&)> flat =
        [&](const std::string& prefix, const json& node, std::map<std::string, std::string>& row) {
            if (node.is_object()) {
                for (const auto& [k, v] : node.items())
                    flat(prefix.empty() ? k : prefix + "." + k, v, row);
            } else if (node.is_array()) {
                for (size_t i = 0; i < node.size(); ++i)
                    flat(prefix + "[" + std::to_string(i) + "]", node[i], row);
            } else {
                row[prefix] = node.is_string() ? node.get<std::string>() : node.dump();
            }
        };

    for (const auto& r : results) {
        std::map<std::string, std::string> row;
        flat("", r, row);
        for (const auto& [k, v] : row)
            if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
        rows.push_back(std::move(row));
    }
    std::sort(columns.begin(), columns.end());

    std::ostringstream os;
    for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < columns.size(); ++i) {
            auto it = row.find(columns[i]);
            os << (i ? "," : "") << (it == row.end() ? "" : it->second);
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace igeo::report
