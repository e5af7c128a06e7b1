#include "nevlab/curve_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nevlab::config {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) {
        throw InputError("curve config: " + msg);
    }
}

void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        require(std::find(allowed.begin(), allowed.end(), it.key()) != allowed.end(),
                "unknown key \"" + it.key() + "\" in " + where);
    }
}

curves::CoefficientRule parse_rule(const json& j) {
    curves::CoefficientRule rule;
    if (j.is_null()) {
        return rule;
    }
    require(j.is_object(), "\"rule\" must be an object");
    check_keys(j, {"kind", "power", "base"}, "rule");
    const std::string kind = j.value("kind", "factorial_power");
    if (kind == "factorial_power") {
        rule.kind = curves::CoefficientRule::Kind::factorial_power;
        rule.power = j.value("power", 2);
        require(rule.power >= 2, "factorial_power needs power >= 2");
    } else if (kind == "geometric_square") {
        rule.kind = curves::CoefficientRule::Kind::geometric_square;
        rule.base = j.value("base", 2);
        require(rule.base >= 2, "geometric_square needs base >= 2");
    } else {
        require(false, "unknown rule kind \"" + kind + "\"");
    }
    return rule;
}

curves::NewtonSeriesFunction::Pattern parse_pattern(const json& j) {
    curves::NewtonSeriesFunction::Pattern p;
    if (j.is_null()) {
        return p;
    }
    require(j.is_object(), "\"pattern\" must be an object");
    check_keys(j, {"zero_block", "stride"}, "pattern");
    p.zero_block = j.value("zero_block", 0L);
    p.stride = j.value("stride", 1L);
    require(p.zero_block >= 0 && p.stride >= 1, "pattern needs zero_block >= 0 and stride >= 1");
    return p;
}

curves::FunctionPtr parse_component(const json& c) {
    if (c.is_string()) {
        return std::make_shared<curves::ExpressionFunction>(Expression::parse(c.get<std::string>()));
    }
    require(c.is_object() && c.size() == 1, "a component is an expression string or a one-key object");
    if (c.contains("power_series")) {
        const json& s = c["power_series"];
        check_keys(s, {"rule", "max_terms"}, "power_series");
        return std::make_shared<curves::PowerSeriesFunction>(parse_rule(s.value("rule", json())),
                                                             s.value("max_terms", 4000L));
    }
    if (c.contains("interpolation")) {
        const json& s = c["interpolation"];
        check_keys(s, {"rule", "pattern", "height_budget"}, "interpolation");
        require(s.contains("height_budget"), "interpolation needs height_budget");
        const long h = s["height_budget"].get<long>();
        require(h >= 1, "height_budget must be >= 1");
        return std::make_shared<curves::NewtonSeriesFunction>(parse_rule(s.value("rule", json())),
                                                              parse_pattern(s.value("pattern", json())), h);
    }
    require(false, "unknown component type \"" + c.begin().key() + "\"");
    return nullptr;
}

}  // namespace

curves::EntireCurve load_curve(const json& j) {
    try {
        if (j.is_string()) {
            return load_curve(builtin_curve_config(j.get<std::string>()));
        }
        require(j.is_object(), "expected an object");
        if (j.contains("builtin")) {
            check_keys(j, {"builtin"}, "curve");
            return load_curve(builtin_curve_config(j["builtin"].get<std::string>()));
        }
        check_keys(j, {"name", "kind", "components", "dimension", "interpolation", "rational_locus"}, "curve");
        const std::string name = j.value("name", std::string("curve"));
        if (j.contains("interpolation")) {
            require(!j.contains("components"), "give either components or interpolation");
            const json& s = j["interpolation"];
            check_keys(s, {"rule", "pattern", "height_budget"}, "interpolation");
            require(s.contains("height_budget"), "interpolation needs height_budget");
            const long h = s["height_budget"].get<long>();
            require(h >= 1, "height_budget must be >= 1");
            curves::InterpolationOptions opt{parse_rule(s.value("rule", json())),
                                             parse_pattern(s.value("pattern", json()))};
            const curves::EntireCurve c = curves::build_rational_curve(h, opt);
            curves::EntireCurve named(c.kind(), c.components(), name, c.dimension());
            named.set_rational_locus(curves::componentwise_locus(named));
            return named;
        }
        const std::string kind = j.value("kind", std::string());
        require(kind == "affine" || kind == "projective", "kind must be \"affine\" or \"projective\"");
        require(j.contains("components") && j["components"].is_array() && !j["components"].empty(),
                "components must be a nonempty array");
        std::vector<curves::FunctionPtr> fs;
        for (const auto& c : j["components"]) {
            fs.push_back(parse_component(c));
        }
        curves::EntireCurve curve(kind == "affine" ? curves::CurveKind::affine : curves::CurveKind::projective,
                                  std::move(fs), name, j.value("dimension", 0));
        if (j.value("rational_locus", true)) {
            curve.set_rational_locus(curves::componentwise_locus(curve));
        }
        return curve;
    } catch (const json::exception& e) {
        throw InputError(std::string("curve config: ") + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

curves::EntireCurve load_curve_file(const std::string& path) {
    return load_curve(read_json_file(path));
}

std::vector<std::string> builtin_curve_names() {
    return {"identity", "exp", "exp-affine", "exp-plane", "interpolation", "tuned"};
}

json builtin_curve_config(const std::string& name) {
    if (name == "identity") {
        return {{"name", "identity"}, {"kind", "projective"}, {"components", {"1", "z"}}};
    }
    if (name == "exp") {
        return {{"name", "exp"}, {"kind", "projective"}, {"components", {"1", "exp(z)"}}};
    }
    if (name == "exp-affine") {
        return {{"name", "exp-affine"}, {"kind", "affine"}, {"components", {"z", "exp(z)"}}};
    }
    if (name == "exp-plane") {
        return {{"name", "exp-plane"}, {"kind", "projective"}, {"components", {"1", "z", "exp(z)"}}};
    }
    if (name == "interpolation") {
        return {{"name", "interpolation"},
                {"interpolation",
                 {{"height_budget", 50}, {"rule", {{"kind", "factorial_power"}, {"power", 2}}}}}};
    }
    if (name == "tuned") {
        return {{"name", "tuned"},
                {"interpolation",
                 {{"height_budget", 12},
                  {"rule", {{"kind", "factorial_power"}, {"power", 2}}},
                  {"pattern", {{"zero_block", 8}, {"stride", 1}}}}}};
    }
    throw InputError("unknown builtin curve \"" + name + "\"");
}

}  // namespace nevlab::config
