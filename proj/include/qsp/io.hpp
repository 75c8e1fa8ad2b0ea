#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qsp/concentration.hpp"
#include "qsp/prolate.hpp"
#include "qsp/signal.hpp"

namespace qsp {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sidecar path: the CSV path with a .json extension.
std::string sidecar_path(const std::string& csv_path);

// CSV `x,y,q0,q1,q2,q3`, x outer and y inner, plus a JSON sidecar holding the grid and
// any extra metadata. Numbers carry 17 significant digits.
void write_signal(const std::string& csv_path, const QSignald& f, const nlohmann::json& meta = nlohmann::json::object());

// Throws ParseError on malformed files or rows inconsistent with the sidecar grid.
QSignald read_signal(const std::string& csv_path, nlohmann::json* meta = nullptr);

nlohmann::json grid_json(const Grid2D& g);
Grid2D grid_from_json(const nlohmann::json& j);

// CSV (node, weight, phi_0, ...) plus JSON {tau, sigma, c_ratio, mu[]}.
void write_basis(const std::string& csv_path, const ProlateBasis& basis);

// Columns case, a1, b1, c1, d1, a2, b2, c2, d2, alpha_gauss, alpha_psi0, beta_gauss,
// beta_psi0, margin.
void write_report_csv(std::ostream& os, const ConcentrationReport& report);
void write_curve_csv(std::ostream& os, const std::vector<RatioPair>& curve);
void print_report_table(std::ostream& os, const ConcentrationReport& report);

}  // namespace qsp
