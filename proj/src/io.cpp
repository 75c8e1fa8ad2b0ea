#include "qsp/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qsp {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << std::setprecision(17);
  return os;
}

std::vector<double> split_numbers(const std::string& line, std::size_t line_no) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size()) throw ParseError("line " + std::to_string(line_no) + ": trailing text in '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

}  // namespace

std::string sidecar_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".json").string();
}

nlohmann::json grid_json(const Grid2D& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
          {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny}};
}

Grid2D grid_from_json(const nlohmann::json& j) {
  try {
    return Grid2D(j.at("x_min").get<double>(), j.at("x_max").get<double>(), j.at("nx").get<std::ptrdiff_t>(),
                  j.at("y_min").get<double>(), j.at("y_max").get<double>(), j.at("ny").get<std::ptrdiff_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("grid metadata: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("grid metadata: ") + e.what());
  }
}

void write_signal(const std::string& csv_path, const QSignald& f, const nlohmann::json& meta) {
  {
    std::ofstream os = open_out(csv_path);
    os << "x,y,q0,q1,q2,q3\n";
    for (std::ptrdiff_t ix = 0; ix < f.nx(); ++ix)
      for (std::ptrdiff_t iy = 0; iy < f.ny(); ++iy) {
        const Quaterniond q = f.at(ix, iy);
        os << f.grid.x(ix) << ',' << f.grid.y(iy) << ',' << q.q0 << ',' << q.q1 << ',' << q.q2 << ',' << q.q3 << '\n';
      }
    if (!os) throw std::runtime_error("write failed for '" + csv_path + "'");
  }
  nlohmann::json side = grid_json(f.grid);
  if (f.exterior_energy != 0) side["exterior_energy"] = f.exterior_energy;
  for (auto it = meta.begin(); it != meta.end(); ++it) side[it.key()] = it.value();
  std::ofstream js = open_out(sidecar_path(csv_path));
  js << side.dump(2) << '\n';
}

QSignald read_signal(const std::string& csv_path, nlohmann::json* meta) {
  std::ifstream js(sidecar_path(csv_path));
  if (!js) throw ParseError("missing sidecar '" + sidecar_path(csv_path) + "'");
  nlohmann::json side;
  try {
    js >> side;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sidecar: ") + e.what());
  }
  const Grid2D g = grid_from_json(side);
  std::ifstream is(csv_path);
  if (!is) throw ParseError("cannot open '" + csv_path + "'");
  std::string line;
  if (!std::getline(is, line) || trim(line) != "x,y,q0,q1,q2,q3")
    throw ParseError("expected header x,y,q0,q1,q2,q3 in '" + csv_path + "'");
  QSignald f(g);
  std::ptrdiff_t row = 0;
  std::size_t line_no = 1;
  const double tol = 1e-9 * std::max({1.0, std::abs(g.x_min), std::abs(g.x_max), std::abs(g.y_min), std::abs(g.y_max)});
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<double> v = split_numbers(line, line_no);
    if (v.size() != 6) throw ParseError("line " + std::to_string(line_no) + ": expected 6 columns");
    if (row >= g.size()) throw ParseError("more rows than the grid holds");
    const std::ptrdiff_t ix = row / g.ny, iy = row % g.ny;
    if (std::abs(v[0] - g.x(ix)) > tol || std::abs(v[1] - g.y(iy)) > tol)
      throw ParseError("line " + std::to_string(line_no) + ": coordinates do not match the grid");
    f.set(ix, iy, {v[2], v[3], v[4], v[5]});
    ++row;
  }
  if (row != g.size()) throw ParseError("expected " + std::to_string(g.size()) + " rows, found " + std::to_string(row));
  if (side.contains("exterior_energy")) f.exterior_energy = side["exterior_energy"].get<double>();
  if (meta) *meta = side;
  return f;
}

void write_basis(const std::string& csv_path, const ProlateBasis& b) {
  {
    std::ofstream os = open_out(csv_path);
    os << "node,weight";
    for (Eigen::Index n = 0; n < b.modes(); ++n) os << ",phi_" << n;
    os << '\n';
    for (Eigen::Index k = 0; k < b.n_quad(); ++k) {
      os << b.nodes(k) << ',' << b.weights(k);
      for (Eigen::Index n = 0; n < b.modes(); ++n) os << ',' << b.phi(k, n);
      os << '\n';
    }
  }
  nlohmann::json j = {{"tau", b.tau}, {"sigma", b.sigma}, {"c_ratio", b.c_ratio},
                      {"mu", std::vector<double>(b.mu.data(), b.mu.data() + b.mu.size())},
                      {"n_quad", b.n_quad()}, {"drift", b.drift}, {"converged", b.converged}};
  std::ofstream js = open_out(sidecar_path(csv_path));
  js << j.dump(2) << '\n';
}

void write_report_csv(std::ostream& os, const ConcentrationReport& rep) {
  const auto old = os.precision(17);
  os << "case,a1,b1,c1,d1,a2,b2,c2,d2,alpha_gauss,alpha_psi0,beta_gauss,beta_psi0,margin\n";
  for (const ComparisonRow& r : rep.rows) {
    os << r.params.label << '-' << (r.params.scenario == Scenario::bandlimited ? "bandlimited" : "time-limited");
    for (double v : r.params.A1.coefficients()) os << ',' << v;
    for (double v : r.params.A2.coefficients()) os << ',' << v;
    os << ',' << r.alpha_gauss << ',' << r.alpha_psi0 << ',' << r.beta_gauss << ',' << r.beta_psi0 << ',' << r.margin
       << '\n';
  }
  os.precision(old);
}

void write_curve_csv(std::ostream& os, const std::vector<RatioPair>& curve) {
  const auto old = os.precision(17);
  os << "alpha,beta_max\n";
  for (const RatioPair& p : curve) os << p.alpha << ',' << p.beta << '\n';
  os.precision(old);
}

void print_report_table(std::ostream& os, const ConcentrationReport& rep) {
  const auto flags = os.flags();
  const auto old = os.precision();
  os << "mu0 = " << std::setprecision(17) << rep.mu0 << '\n';
  constexpr int w = 25;
  os << std::left << std::setw(28) << "case" << std::right << std::setw(w) << "alpha_gauss" << std::setw(w)
     << "alpha_psi0" << std::setw(w) << "beta_gauss" << std::setw(w) << "beta_psi0" << std::setw(w) << "margin"
     << "  order\n";
  for (const ComparisonRow& r : rep.rows) {
    const std::string label =
        r.params.label + (r.params.scenario == Scenario::bandlimited ? " bandlimited" : " time-limited");
    os << std::left << std::setw(28) << label << std::right << std::setw(w) << r.alpha_gauss << std::setw(w)
       << r.alpha_psi0 << std::setw(w) << r.beta_gauss << std::setw(w) << r.beta_psi0 << std::setw(w) << r.margin
       << "  " << (r.ordering_ok ? "ok" : "VIOLATED") << '\n';
  }
  os.flags(flags);
  os.precision(old);
}

}  // namespace qsp
