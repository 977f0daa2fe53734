#include "jetext/jet_io.hpp"

#include <json.hpp>

#include "jetext/report.hpp"

namespace jetext {

static MultiIndex parse_alpha_key(const std::string& key, int dim) {
    MultiIndex a;
    a.dim = dim;
    int part = 0;
    size_t pos = 0;
    while (part < dim) {
        size_t comma = key.find(',', pos);
        std::string tok = key.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty()) throw config_error("bad multi-index key '" + key + "'");
        int v = std::stoi(tok);
        if (v < 0 || v >= kMaxJetOrder + 1) throw config_error("multi-index exponent out of range in '" + key + "'");
        a.e[static_cast<size_t>(part++)] = static_cast<uint8_t>(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (part != dim) throw config_error("multi-index key '" + key + "' does not match dimension");
    return a;
}

JetField parse_jet_field(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("jet JSON parse failure: ") + e.what());
    }
    try {
        JetField f;
        f.dim = j.at("dim").get<int>();
        f.m = j.at("m").get<int>();
        f.p = j.at("p").get<double>();
        if (f.dim < 1 || f.dim > kMaxDim) throw config_error("dim out of range 1..3");
        for (const auto& pt : j.at("points")) {
            Point x;
            x.dim = f.dim;
            if (static_cast<int>(pt.size()) != f.dim) throw config_error("point arity mismatch");
            for (int i = 0; i < f.dim; ++i) x[i] = pt.at(static_cast<size_t>(i)).get<double>();
            f.points.push_back(x);
        }
        const auto& jets = j.at("jets");
        if (jets.size() != f.points.size()) throw config_error("jets count must match points");
        for (size_t k = 0; k < f.points.size(); ++k) {
            Poly poly = make_poly(f.points[k], f.m - 1);
            for (auto it = jets.at(k).begin(); it != jets.at(k).end(); ++it) {
                MultiIndex a = parse_alpha_key(it.key(), f.dim);
                if (a.order() > f.m - 1) throw config_error("jet coefficient order exceeds m-1");
                poly_coeff(poly, a) = it.value().get<double>();
            }
            f.polys.push_back(std::move(poly));
        }
        validate_field(f);
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("jet JSON schema violation: ") + e.what());
    }
}

static std::string alpha_key(const MultiIndex& a) {
    std::string k;
    for (int i = 0; i < a.dim; ++i) {
        if (i) k += ',';
        k += std::to_string(int(a[i]));
    }
    return k;
}

std::string write_jet_field(const JetField& f) {
    JsonWriter w;
    w.begin_object();
    w.kv("dim", f.dim).kv("m", f.m).kv("p", f.p);
    w.key("points").begin_array();
    for (const Point& x : f.points) {
        w.begin_array();
        for (int i = 0; i < f.dim; ++i) w.value(x[i]);
        w.end_array();
    }
    w.end_array();
    w.key("jets").begin_array();
    const std::vector<MultiIndex>& all = multi_indices_up_to(f.dim, f.m - 1);
    for (const Poly& p : f.polys) {
        w.begin_object();
        for (size_t i = 0; i < all.size(); ++i) {
            w.kv(alpha_key(all[i]), p.coeffs[i]);
        }
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

}  // namespace jetext
