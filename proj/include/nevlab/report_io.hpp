#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nevlab/counting.hpp"
#include "nevlab/heights.hpp"
#include "nevlab/nevanlinna.hpp"

namespace nevlab::io {

std::string version();

// Everything needed to reproduce an output file.
struct RunConfig {
    std::string command;
    nlohmann::json curve;   // curve config as loaded
    nlohmann::json params;  // command parameters
    std::uint64_t seed = 0;
    double tol = 1e-12;
    nlohmann::json to_json() const;
};

// Shortest decimal that reads back to the same double.
std::string num(double x);

using Table = std::vector<std::vector<std::string>>;

// CSV with a commented header: "# nevlab <version>", "# config <json>",
// "# schema <name> v<k>", then the column names and rows.
std::string csv_text(const RunConfig& cfg, const std::string& schema, const std::vector<std::string>& columns,
                     const Table& rows);
std::string json_text(const RunConfig& cfg, const nlohmann::json& result);

void write_file(const std::string& path, const std::string& text);

// Row builders; column names come from the matching *_columns().
std::vector<std::string> profile_columns();
Table profile_rows(const nevanlinna::CharacteristicProfile& p);

nlohmann::json to_json(const nevanlinna::FmtReport& r);
std::vector<std::string> fmt_columns();
std::vector<std::string> fmt_row(const nevanlinna::FmtReport& r);

std::vector<std::string> points_columns(int ambient_dim);
Table points_rows(const std::vector<heights::HeightedPoint>& pts);
nlohmann::json to_json(const heights::HeightedPoint& p);

std::vector<std::string> count_columns();
Table count_rows(const std::vector<counting::CountRecord>& recs);
// Long format: r, H, series, value for count, envelope and kappa.
std::vector<std::string> envelope_columns();
Table envelope_rows(const std::vector<counting::CountRecord>& recs, double epsilon);

nlohmann::json to_json(const counting::WindowReport& w);
nlohmann::json to_json(const counting::SmallDiamReport& r);
nlohmann::json to_json(const nevanlinna::ProjectiveBoundReport& r);

}  // namespace nevlab::io
