#include "gaplab/serialization.hpp"

#include <string>
#include <vector>

#include "gaplab/error.hpp"

namespace gaplab {

namespace {

nlohmann::json require_key(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) {
        throw Error(ErrorKind::Io, std::string("missing key '") + key + "'");
    }
    return j.at(key);
}

double require_number(const nlohmann::json& j, const char* key) {
    const nlohmann::json v = require_key(j, key);
    if (!v.is_number()) {
        throw Error(ErrorKind::Io, std::string("key '") + key + "' is not a number");
    }
    return v.get<double>();
}

}  // namespace

nlohmann::json to_json(const ConvexDomain& d) {
    nlohmann::json j;
    j["kind"] = kind_name(d);
    if (const auto* r = std::get_if<Rectangle>(&d)) {
        j["a"] = r->a;
        j["b"] = r->b;
    } else if (const auto* e = std::get_if<Ellipse>(&d)) {
        j["a"] = e->a;
        j["b"] = e->b;
    } else if (const auto* s = std::get_if<Stadium>(&d)) {
        j["length"] = s->length;
        j["radius"] = s->radius;
    } else {
        const auto& p = std::get<Polygon>(d);
        nlohmann::json verts = nlohmann::json::array();
        for (const Vec2& v : p.vertices) {
            verts.push_back({v.x, v.y});
        }
        j["vertices"] = verts;
    }
    return j;
}

ConvexDomain domain_from_json(const nlohmann::json& j) {
    const nlohmann::json kind = require_key(j, "kind");
    if (!kind.is_string()) {
        throw Error(ErrorKind::Io, "domain kind must be a string");
    }
    const std::string name = kind.get<std::string>();
    if (name == "rectangle") {
        return make_rectangle(require_number(j, "a"), require_number(j, "b"));
    }
    if (name == "ellipse") {
        return make_ellipse(require_number(j, "a"), require_number(j, "b"));
    }
    if (name == "stadium") {
        return make_stadium(require_number(j, "length"), require_number(j, "radius"));
    }
    if (name == "polygon") {
        const nlohmann::json verts = require_key(j, "vertices");
        if (!verts.is_array()) {
            throw Error(ErrorKind::Io, "polygon vertices must be an array");
        }
        std::vector<Vec2> vs;
        for (const auto& v : verts) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
                throw Error(ErrorKind::Io, "polygon vertex must be a pair of numbers");
            }
            vs.push_back(Vec2{v[0].get<double>(), v[1].get<double>()});
        }
        return make_polygon(std::move(vs));
    }
    throw Error(ErrorKind::Io, "unknown domain kind '" + name + "'");
}

nlohmann::json to_json(const HessianReport& r) {
    nlohmann::json j;
    j["x0"] = {r.x0.x, r.x0.y};
    j["umax"] = r.umax;
    j["hessian"] = {{"xx", r.hessian.xx}, {"xy", r.hessian.xy}, {"yy", r.hessian.yy}};
    j["eigenvalues"] = {r.lambda_max, r.lambda_min};
    j["trace_residual"] = r.trace_residual;
    j["aspect"] = r.aspect;
    j["bound_rhs"] = r.bound_rhs;
    j["c1"] = r.c1;
    j["c2"] = r.c2;
    return j;
}

nlohmann::json to_json(const FourierSeries& s) {
    nlohmann::json j;
    j["a"] = s.a;
    j["b"] = s.b;
    return j;
}

FourierSeries series_from_json(const nlohmann::json& j) {
    FourierSeries s;
    const nlohmann::json a = require_key(j, "a");
    const nlohmann::json b = require_key(j, "b");
    if (!a.is_array() || !b.is_array() || a.size() != b.size()) {
        throw Error(ErrorKind::Io, "series arrays must match in length");
    }
    for (const auto& v : a) {
        s.a.push_back(v.get<double>());
    }
    for (const auto& v : b) {
        s.b.push_back(v.get<double>());
    }
    return s;
}

}  // namespace gaplab
