#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frobenius/equation.hpp"
#include "frobenius/recurrence.hpp"

// JSON input schemas. Complex numbers are [re, im] pairs; preset parameters
// may also be plain reals.
//
//   {"kind": "fuchsian", "singular_points": [[0,0],[1,0]],
//    "gammas": [[1,0],[2,0]], "van_vleck": [[1,0]]}
//   {"kind": "hypergeometric", "params": {"a": 1, "b": 1, "c": [2, 0]}}
//   {"kind": "heun", "params": {"a": 2, "q": 1, "alpha": 1, "beta": 2,
//                               "gamma": 1, "delta": 2, "epsilon": 1}}
//
//   {"span": 2, "mu": [[mu(1,1), ..., mu(1,K)], [mu(2,1), ..., mu(2,K)]],
//    "phi": [phi_1, ..., phi_K], "w0": [1, 0]}

namespace frobenius::io {

using nlohmann::json;

inline Complex parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw Error(ErrorCode::Parse, where + ": expected a number or an [re, im] pair");
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline std::vector<Complex> parse_complex_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorCode::Parse, where + ": expected a list");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline json complex_list_to_json(const std::vector<Complex>& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(complex_to_json(z));
    return out;
}

enum class EquationKind { fuchsian, hypergeometric, heun };

struct EquationFile {
    EquationKind kind = EquationKind::fuchsian;
    std::vector<Complex> singular_points;
    std::vector<Complex> gammas;
    std::vector<Complex> van_vleck;
    std::map<std::string, Complex> params;

    bool operator==(const EquationFile&) const = default;
};

inline const std::vector<std::string>& preset_parameter_names(EquationKind kind) {
    static const std::vector<std::string> hyper{"a", "b", "c"};
    static const std::vector<std::string> heun{"a", "q", "alpha", "beta", "gamma", "delta", "epsilon"};
    static const std::vector<std::string> none;
    switch (kind) {
        case EquationKind::hypergeometric: return hyper;
        case EquationKind::heun: return heun;
        default: return none;
    }
}

inline EquationFile parse_equation_file(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw Error(ErrorCode::Parse, "equation file needs a string field 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    EquationFile f;
    if (kind == "fuchsian") {
        f.kind = EquationKind::fuchsian;
        for (const char* key : {"singular_points", "gammas", "van_vleck"})
            if (!j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
        f.singular_points = parse_complex_list(j["singular_points"], "singular_points");
        f.gammas = parse_complex_list(j["gammas"], "gammas");
        f.van_vleck = parse_complex_list(j["van_vleck"], "van_vleck");
        return f;
    }
    if (kind == "hypergeometric") f.kind = EquationKind::hypergeometric;
    else if (kind == "heun") f.kind = EquationKind::heun;
    else throw Error(ErrorCode::Parse, "unknown kind '" + kind + "'");
    if (!j.contains("params") || !j["params"].is_object()) throw Error(ErrorCode::Parse, "missing object 'params'");
    for (const auto& name : preset_parameter_names(f.kind)) {
        if (!j["params"].contains(name)) throw Error(ErrorCode::Parse, "missing parameter '" + name + "'");
        f.params[name] = parse_complex(j["params"][name], "params." + name);
    }
    return f;
}

inline json to_json(const EquationFile& f) {
    json j;
    switch (f.kind) {
        case EquationKind::fuchsian:
            j["kind"] = "fuchsian";
            j["singular_points"] = complex_list_to_json(f.singular_points);
            j["gammas"] = complex_list_to_json(f.gammas);
            j["van_vleck"] = complex_list_to_json(f.van_vleck);
            return j;
        case EquationKind::hypergeometric: j["kind"] = "hypergeometric"; break;
        case EquationKind::heun: j["kind"] = "heun"; break;
    }
    j["params"] = json::object();
    for (const auto& [name, value] : f.params) j["params"][name] = complex_to_json(value);
    return j;
}

inline FuchsianEquation build(const EquationFile& f) {
    switch (f.kind) {
        case EquationKind::hypergeometric:
            return preset_hypergeometric(f.params.at("a"), f.params.at("b"), f.params.at("c"));
        case EquationKind::heun:
            return preset_heun(f.params.at("a"), f.params.at("q"), f.params.at("alpha"), f.params.at("beta"),
                               f.params.at("gamma"), f.params.at("delta"), f.params.at("epsilon"));
        case EquationKind::fuchsian:
            break;
    }
    return build_equation(f.singular_points, f.gammas, Polynomial(f.van_vleck));
}

/// Recurrence given as a dense table mu[j-1][k-1], j = 1..span, k = 1..K.
class TableRule {
public:
    TableRule(int span, std::vector<std::vector<Complex>> mu) : span_(span), mu_(std::move(mu)) {}

    int span() const noexcept { return span_; }
    long max_index() const noexcept { return mu_.empty() ? 0 : static_cast<long>(mu_.front().size()); }

    Complex mu(int j, long k) const {
        if (j < 1 || j > span_) return 0.0;
        if (k < 1 || k > max_index())
            throw Error(ErrorCode::RuleRange, "rule table has no entry for k = " + std::to_string(k), k);
        return mu_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k - 1)];
    }

private:
    int span_;
    std::vector<std::vector<Complex>> mu_;
};

struct RuleFile {
    int span = 1;
    std::vector<std::vector<Complex>> mu;
    std::optional<std::vector<Complex>> phi;
    Complex start{1.0};

    long K() const noexcept { return mu.empty() ? 0 : static_cast<long>(mu.front().size()); }
    TableRule rule() const { return TableRule(span, mu); }

    InhomogeneityRule inhomogeneity() const {
        if (!phi) return InhomogeneityRule::zero();
        auto values = std::make_shared<std::vector<Complex>>(*phi);
        return InhomogeneityRule([values](long k) -> Complex {
            if (k < 1 || k > static_cast<long>(values->size()))
                throw Error(ErrorCode::RuleRange, "phi has no entry for k = " + std::to_string(k), k);
            return (*values)[static_cast<std::size_t>(k - 1)];
        });
    }
};

inline RuleFile parse_rule_file(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::Parse, "rule file must be a JSON object");
    if (!j.contains("span") || !j["span"].is_number_integer())
        throw Error(ErrorCode::Parse, "rule file needs an integer 'span'");
    RuleFile r;
    r.span = j["span"].get<int>();
    if (r.span < 1) throw Error(ErrorCode::Parse, "span must be >= 1");
    if (!j.contains("mu") || !j["mu"].is_array()) throw Error(ErrorCode::Parse, "rule file needs a 'mu' table");
    const json& mu = j["mu"];
    if (static_cast<int>(mu.size()) != r.span)
        throw Error(ErrorCode::Parse, "mu has " + std::to_string(mu.size()) + " rows, span is " +
                                          std::to_string(r.span));
    for (std::size_t row = 0; row < mu.size(); ++row)
        r.mu.push_back(parse_complex_list(mu[row], "mu[" + std::to_string(row) + "]"));
    const std::size_t K = r.mu.front().size();
    if (K < 1) throw Error(ErrorCode::Parse, "mu rows must be non-empty");
    for (const auto& row : r.mu)
        if (row.size() != K) throw Error(ErrorCode::Parse, "mu table is not rectangular");
    if (j.contains("phi")) {
        r.phi = parse_complex_list(j["phi"], "phi");
        if (r.phi->size() != K) throw Error(ErrorCode::Parse, "phi length differs from the mu row length");
    }
    if (j.contains("w0") && j.contains("v0")) throw Error(ErrorCode::Parse, "give either w0 or v0, not both");
    if (j.contains("w0")) r.start = parse_complex(j["w0"], "w0");
    if (j.contains("v0")) r.start = parse_complex(j["v0"], "v0");
    return r;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, "'" + path + "': " + e.what());
    }
}

/// 17 significant digits, '.' decimal point, no negative zero.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace frobenius::io
