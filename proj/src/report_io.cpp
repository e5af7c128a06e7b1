#include "nevlab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace nevlab::io {

using nlohmann::json;

std::string version() {
    return NEVLAB_VERSION;
}

json RunConfig::to_json() const {
    return {{"command", command}, {"curve", curve}, {"params", params}, {"seed", seed}, {"tol", tol}};
}

std::string num(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        s += (i ? "," : "") + csv_field(xs[i]);
    }
    return s;
}

}  // namespace

std::string csv_text(const RunConfig& cfg, const std::string& schema, const std::vector<std::string>& columns,
                     const Table& rows) {
    std::string s = "# nevlab " + version() + "\n";
    s += "# config " + cfg.to_json().dump() + "\n";
    s += "# schema " + schema + " v1\n";
    s += join(columns) + "\n";
    for (const auto& row : rows) {
        s += join(row) + "\n";
    }
    return s;
}

std::string json_text(const RunConfig& cfg, const json& result) {
    const json j = {{"nevlab", version()}, {"config", cfg.to_json()}, {"result", result}};
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write " + path);
    }
    out << text;
}

std::vector<std::string> profile_columns() {
    return {"curve", "r", "w0_re", "w0_im", "T", "err"};
}

Table profile_rows(const nevanlinna::CharacteristicProfile& p) {
    Table t;
    for (const auto& s : p.samples) {
        t.push_back({p.curve, num(s.r), num(p.base_point.real()), num(p.base_point.imag()), num(s.T), num(s.error)});
    }
    return t;
}

json to_json(const nevanlinna::FmtReport& r) {
    return {{"r", r.r},
            {"w0", {r.w0.real(), r.w0.imag()}},
            {"section", r.section},
            {"proximity", r.proximity},
            {"characteristic", r.characteristic},
            {"zero_sum", r.zero_sum},
            {"base_value", r.base_value},
            {"residual", r.residual},
            {"error", r.error},
            {"zeros", r.zeros},
            {"nudges", r.nudges},
            {"pass", r.pass()}};
}

std::vector<std::string> fmt_columns() {
    return {"section", "r", "w0_re", "w0_im", "proximity", "characteristic", "zero_sum",
            "base_value", "residual", "err", "zeros", "nudges", "pass"};
}

std::vector<std::string> fmt_row(const nevanlinna::FmtReport& r) {
    return {r.section,         num(r.r),        num(r.w0.real()),  num(r.w0.imag()),
            num(r.proximity),  num(r.characteristic), num(r.zero_sum), num(r.base_value),
            num(r.residual),   num(r.error),    std::to_string(r.zeros), std::to_string(r.nudges),
            r.pass() ? "1" : "0"};
}

std::vector<std::string> points_columns(int ambient_dim) {
    std::vector<std::string> c{"w_num", "w_den"};
    for (int i = 0; i <= ambient_dim; ++i) {
        c.push_back("x" + std::to_string(i));
    }
    c.push_back("h_fs");
    c.push_back("h_max");
    return c;
}

Table points_rows(const std::vector<heights::HeightedPoint>& pts) {
    Table t;
    for (const auto& p : pts) {
        std::vector<std::string> row{p.w.get_num().get_str(), p.w.get_den().get_str()};
        for (const auto& c : p.point.coords()) {
            row.push_back(c.get_str());
        }
        row.push_back(num(p.h_fs));
        row.push_back(num(p.h_max));
        t.push_back(std::move(row));
    }
    return t;
}

json to_json(const heights::HeightedPoint& p) {
    json coords = json::array();
    for (const auto& c : p.point.coords()) {
        coords.push_back(c.get_str());
    }
    return {{"w", p.w.get_str()}, {"coords", coords}, {"h_fs", p.h_fs}, {"h_max", p.h_max}};
}

std::vector<std::string> count_columns() {
    return {"r", "H", "T_r", "T_scaled", "T_wide", "C", "excluded", "kappa"};
}

Table count_rows(const std::vector<counting::CountRecord>& recs) {
    Table t;
    for (const auto& r : recs) {
        t.push_back({num(r.r), num(r.H), num(r.T_r), num(r.T_scaled), num(r.T_wide), std::to_string(r.count),
                     std::to_string(r.excluded), num(r.kappa)});
    }
    return t;
}

std::vector<std::string> envelope_columns() {
    return {"r", "H", "series", "value"};
}

Table envelope_rows(const std::vector<counting::CountRecord>& recs, double epsilon) {
    Table t;
    for (auto r : recs) {
        r.epsilon = epsilon;
        t.push_back({num(r.r), num(r.H), "count", std::to_string(r.count)});
        t.push_back({num(r.r), num(r.H), "envelope", num(r.envelope())});
        t.push_back({num(r.r), num(r.H), "kappa", num(r.kappa)});
    }
    return t;
}

json to_json(const counting::WindowReport& w) {
    json entries = json::array();
    for (const auto& e : w.entries) {
        entries.push_back({{"x", e.x}, {"y", e.y}, {"C", e.count}, {"member", e.member}});
    }
    json chains = json::array();
    for (std::size_t i = 0; i < w.chains.size(); ++i) {
        chains.push_back({{"indices", w.chains[i]}, {"spanning", static_cast<bool>(w.spanning[i])}});
    }
    return {{"gamma", w.gamma},      {"epsilon", w.epsilon},       {"A", w.A},
            {"n", w.n},              {"headline", w.headline},     {"entries", entries},
            {"chains", chains},      {"largest_disk", w.largest_disk}, {"span", w.span},
            {"any_spanning", w.any_spanning()}};
}

json to_json(const counting::SmallDiamReport& r) {
    json pts = json::array();
    for (const auto& p : r.in_ball) {
        pts.push_back(to_json(p));
    }
    json held = json::array();
    for (const auto& v : r.held_out_values) {
        held.push_back(v.get_str());
    }
    return {{"status", counting::to_string(r.status)},
            {"reason", r.reason},
            {"r", r.r},
            {"r1", r.r1},
            {"H", r.H},
            {"d", r.d},
            {"T_scaled", r.T_scaled},
            {"threshold", r.threshold},
            {"ball_center", {r.ball_center.real(), r.ball_center.imag()}},
            {"ball_radius", r.ball_radius},
            {"diameter", r.diameter},
            {"points_in_ball", pts},
            {"subset_size", r.subset_size},
            {"held_out_values", held},
            {"polynomial", r.polynomial}};
}

json to_json(const nevanlinna::ProjectiveBoundReport& r) {
    return {{"applicable", r.applicable},
            {"r", r.r},
            {"T_r", r.T_r},
            {"T_er", r.T_er},
            {"H", r.H},
            {"atoms", r.atoms},
            {"radii_sum", r.radii_sum},
            {"radii_bound", r.radii_bound},
            {"bound", r.bound},
            {"samples", r.samples},
            {"violations", r.violations},
            {"max_T_w0", r.max_T_w0},
            {"slack", r.slack},
            {"exceptional", r.exceptional.to_json()},
            {"pass", r.pass()}};
}

}  // namespace nevlab::io
