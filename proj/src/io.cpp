#include "polycover/io.hpp"

#include <fstream>
#include <sstream>

namespace polycover::io {

namespace {

std::string position(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Polytope parse_body(const std::string& text, const std::string& source) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        // byte is one past the offending character
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        throw PreconditionError(source + ": malformed JSON at " + position(text, at));
    }
    const auto fail = [&](const std::string& what) { throw PreconditionError(source + ": " + what); };
    if (!j.is_object()) fail("expected an object with \"dim\" and \"vertices\"");
    if (!j.contains("dim") || !j["dim"].is_number_integer()) fail("\"dim\" must be an integer");
    const long n = j["dim"].get<long>();
    if (n < 1) fail("\"dim\" must be positive");
    if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty())
        fail("\"vertices\" must be a nonempty array");

    const Json& rows = j["vertices"];
    Matrix v(n, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Json& row = rows[r];
        if (!row.is_array()) fail("vertex " + std::to_string(r) + " is not an array");
        if (static_cast<long>(row.size()) != n)
            fail("vertex " + std::to_string(r) + " has " + std::to_string(row.size()) + " coordinates, expected " +
                 std::to_string(n));
        for (long i = 0; i < n; ++i) {
            if (!row[i].is_number()) fail("vertex " + std::to_string(r) + " has a non-numeric coordinate");
            v(i, static_cast<Eigen::Index>(r)) = row[i].get<Scalar>();
        }
    }
    return Polytope(std::move(v));
}

Polytope read_body(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_body(ss.str(), path);
}

Json to_json(const Vec& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

Json columns_to_json(const Matrix& m) {
    Json j = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) j.push_back(to_json(m.col(c)));
    return j;
}

Json body_to_json(const Polytope& p) { return Json{{"dim", p.dim()}, {"vertices", columns_to_json(p.vertices())}}; }

void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot write " + path);
    out << j.dump(2) << '\n';
}

Json selection_to_json(const NormalSelection& sel) {
    return Json{{"normals", columns_to_json(sel.normals)},
                {"touch_indices", sel.touch_indices},
                {"coefficients", to_json(sel.coefficients)}};
}

Json counterexample_to_json(const Counterexample& ce, bool with_log) {
    const CounterexampleChecks& c = ce.checks;
    Json j{{"body", body_to_json(ce.body)},
           {"cover", body_to_json(ce.cover)},
           {"d", ce.d},
           {"epsilon", ce.epsilon},
           {"epsilon_gap", ce.epsilon_gap},
           {"scale_sigma", ce.scale_sigma},
           {"sweep_min_sigma", ce.sweep_min_sigma},
           {"seed", ce.seed},
           {"sweep_samples", ce.sweep_samples},
           {"gap_directions", ce.log_directions.size()},
           {"attempts", ce.attempts},
           {"lifted", ce.lifted},
           {"contains_translate", !c.no_translate},
           {"checks",
            {{"touching", c.touching},
             {"maximal", c.maximal},
             {"epsilon_above_one", c.epsilon_above_one},
             {"no_translate", c.no_translate},
             {"farkas_certified", c.farkas_certified},
             {"shadows_cover", c.shadows_cover},
             {"flat_lift", c.flat_lift},
             {"flat_lift_runs", c.flat_lift_runs}}},
           {"certificate", selection_to_json(ce.certificate)}};
    if (with_log) {
        Json log = Json::array();
        for (std::size_t i = 0; i < ce.log_directions.size(); ++i)
            log.push_back(Json{{"direction", to_json(ce.log_directions[i])}, {"sigma", ce.log_sigmas[i]}});
        j["sample_log"] = std::move(log);
    }
    return j;
}

}  // namespace polycover::io
