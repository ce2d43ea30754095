#include "qcorr/io.hpp"

#include <fstream>

namespace qcorr {

namespace {

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw IoError("matrix: expected a non-empty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols) throw IoError("matrix: ragged rows");
        for (int c = 0; c < cols; ++c) {
            const Json& e = j[i][c];
            if (!e.is_array() || e.size() != 2) throw IoError("matrix: entry is not [re, im]");
            m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

std::vector<int> dims_from_json(const Json& j) {
    if (!j.contains("dims")) throw IoError("state: missing dims");
    return j.at("dims").get<std::vector<int>>();
}

}  // namespace

Json state_to_json(const DensityMatrix& rho, const std::string& label) {
    Json j;
    j["dims"] = rho.dim_spec().dims;
    j["matrix"] = matrix_to_json(rho.entries());
    if (!label.empty()) j["label"] = label;
    return j;
}

Json state_to_json(const PureState& psi, const std::string& label) {
    Json j;
    j["dims"] = psi.dim_spec().dims;
    Json v = Json::array();
    for (int i = 0; i < psi.dim(); ++i)
        v.push_back(Json::array({psi.amplitudes()(i).real(), psi.amplitudes()(i).imag()}));
    j["vector"] = std::move(v);
    if (!label.empty()) j["label"] = label;
    return j;
}

bool json_is_pure_state(const Json& j) { return j.contains("vector"); }

DensityMatrix density_from_json(const Json& j) {
    try {
        if (json_is_pure_state(j)) return pure_from_json(j).to_density();
        DimSpec spec(dims_from_json(j));  // capacity is checked before the matrix is parsed
        return DensityMatrix(std::move(spec), matrix_from_json(j.at("matrix")));
    } catch (const Json::exception& e) {
        throw IoError(std::string("state parse error: ") + e.what());
    }
}

PureState pure_from_json(const Json& j) {
    try {
        const Json& jv = j.at("vector");
        Vector v(jv.size());
        for (std::size_t i = 0; i < jv.size(); ++i) {
            if (!jv[i].is_array() || jv[i].size() != 2) throw IoError("vector entry is not [re, im]");
            v(static_cast<int>(i)) = Complex(jv[i][0].get<double>(), jv[i][1].get<double>());
        }
        return PureState(DimSpec(dims_from_json(j)), std::move(v));
    } catch (const Json::exception& e) {
        throw IoError(std::string("pure state parse error: ") + e.what());
    }
}

Json povm_to_json(const Povm& povm) {
    Json j;
    j["dim"] = povm.dim;
    Json eff = Json::array();
    for (const Matrix& e : povm.effects) eff.push_back(matrix_to_json(e));
    j["effects"] = std::move(eff);
    return j;
}

Povm povm_from_json(const Json& j) {
    try {
        std::vector<Matrix> eff;
        for (const Json& e : j.at("effects")) eff.push_back(matrix_from_json(e));
        return Povm(j.at("dim").get<int>(), std::move(eff));
    } catch (const Json::exception& e) {
        throw IoError(std::string("povm parse error: ") + e.what());
    }
}

std::string bound_direction_name(BoundDirection b) {
    switch (b) {
        case BoundDirection::Lower: return "lower";
        case BoundDirection::Upper: return "upper";
        case BoundDirection::Exact: return "exact";
    }
    return "exact";
}

Json measure_report_to_json(const MeasureReport& rep, const std::string& certificate_file) {
    Json j;
    j["name"] = rep.name;
    j["value"] = rep.value;
    j["bound_direction"] = bound_direction_name(rep.bound_direction);
    if (!certificate_file.empty()) j["certificate_file"] = certificate_file;
    Json d;
    if (rep.diagnostics.closed_form) {
        d["kind"] = "closed-form";
    } else {
        d["kind"] = "optimizer";
        d["restarts"] = rep.diagnostics.restarts;
        d["converged"] = rep.diagnostics.converged;
        d["iters"] = rep.diagnostics.iters;
    }
    j["diagnostics"] = std::move(d);
    return j;
}

OptConfig opt_config_from_json(const Json& j) {
    OptConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "n_outcomes") cfg.n_outcomes = it->get<int>();
        else if (key == "restarts") cfg.restarts = it->get<int>();
        else if (key == "max_iters") cfg.max_iters = it->get<int>();
        else if (key == "conv_tol") cfg.conv_tol = it->get<double>();
        else if (key == "seed") cfg.seed = it->get<std::uint64_t>();
        else if (key == "sweeps") continue;  // read via sweeps_from_json
        else if (key == "mode") {
            const std::string m = it->get<std::string>();
            if (m == "rank1-stiefel") cfg.mode = OptMode::Rank1Stiefel;
            else if (m == "general") cfg.mode = OptMode::General;
            else if (m == "projective") cfg.mode = OptMode::Projective;
            else throw IoError("config: unknown mode '" + m + "'");
        } else {
            throw IoError("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

int sweeps_from_json(const Json& j, int fallback) {
    if (j.contains("sweeps")) return j.at("sweeps").get<int>();
    return fallback;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for write: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    try {
        Json j;
        in >> j;
        return j;
    } catch (const Json::exception& e) {
        throw IoError("parse error in " + path + ": " + e.what());
    }
}

namespace {

bool type_matches(const Json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

std::string validate_at(const Json& v, const Json& schema, const std::string& path) {
    if (schema.contains("type") && !type_matches(v, schema.at("type").get<std::string>()))
        return path + ": expected type " + schema.at("type").get<std::string>();
    if (schema.contains("enum")) {
        bool ok = false;
        for (const Json& e : schema.at("enum"))
            if (e == v) ok = true;
        if (!ok) return path + ": value not in enum";
    }
    if (schema.contains("required"))
        for (const Json& r : schema.at("required"))
            if (!v.contains(r.get<std::string>()))
                return path + ": missing required key '" + r.get<std::string>() + "'";
    if (schema.contains("properties") && v.is_object()) {
        for (auto it = schema.at("properties").begin(); it != schema.at("properties").end(); ++it) {
            if (!v.contains(it.key())) continue;
            std::string err = validate_at(v.at(it.key()), it.value(), path + "/" + it.key());
            if (!err.empty()) return err;
        }
    }
    if (schema.contains("items") && v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            std::string err = validate_at(v[i], schema.at("items"), path + "[" + std::to_string(i) + "]");
            if (!err.empty()) return err;
        }
    }
    return "";
}

}  // namespace

std::string validate_against_schema(const Json& value, const Json& schema) {
    return validate_at(value, schema, "$");
}

}  // namespace qcorr
