#include "mudsim/parameters.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mudsim {

namespace {

constexpr double kMegaPa = 1.0e6;
constexpr double kKiloPa = 1.0e3;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

MudParameters table_row(double w_percent, double k_i_mpa, double b_i_mpa, double k_w_mpa,
                        double b_w_mpa, double alpha_mpa, double beta, double sigma_y_kpa,
                        double zeta, double omega0, double rmse_n) {
  MudParameters p;
  p.k_i = k_i_mpa * kMegaPa;
  p.b_i = b_i_mpa * kMegaPa;
  p.k_w = k_w_mpa * kMegaPa;
  p.b_w = b_w_mpa * kMegaPa;
  p.alpha = alpha_mpa * kMegaPa;
  p.beta = beta;
  p.sigma_y = sigma_y_kpa * kKiloPa;
  p.zeta = zeta;
  p.omega0 = omega0;
  p.lambda_drag = 0.013;
  p.rho_m = 1840.0;
  p.water_content = w_percent / 100.0;
  p.table_rmse = rmse_n;
  return p;
}

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

double get_number(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw std::invalid_argument(std::string("parameter file: missing numeric key '") + key + "'");
  }
  return it->get<double>();
}

// Accepts either the paper-unit key or an SI-suffixed alternative.
double get_scaled(const nlohmann::json& j, const char* paper_key, double to_si,
                  const char* si_key) {
  if (j.contains(paper_key)) return get_number(j, paper_key) * to_si;
  if (j.contains(si_key)) return get_number(j, si_key);
  throw std::invalid_argument(std::string("parameter file: missing key '") + paper_key + "'");
}

}  // namespace

void MudParameters::validate() const {
  require(positive_finite(k_i), "k_i must be > 0");
  require(positive_finite(b_i), "b_i must be > 0");
  require(positive_finite(k_w), "k_w must be > 0");
  require(positive_finite(b_w), "b_w must be > 0");
  require(positive_finite(alpha), "alpha must be > 0");
  require(std::isfinite(beta) && beta > 0.0 && beta <= 1.0, "beta must lie in (0, 1]");
  require(positive_finite(sigma_y), "sigma_y must be > 0");
  require(positive_finite(zeta), "zeta must be > 0");
  require(positive_finite(omega0), "omega0 must be > 0");
  require(std::isfinite(lambda_drag) && lambda_drag >= 0.0, "lambda_drag must be >= 0");
  require(positive_finite(rho_m), "rho_m must be > 0");
}

void IntruderGeometry::validate() const {
  require(positive_finite(length), "geometry length must be > 0");
  require(positive_finite(width), "geometry width must be > 0");
  require(positive_finite(height), "geometry height must be > 0");
  require(positive_finite(char_width), "geometry char_width must be > 0");
}

const std::vector<MudParameters>& builtin_presets() {
  static const std::vector<MudParameters> presets = {
      table_row(15, 1.21, 0.24, 1.48, 1.35, 0.17, 0.56, 17, 0.47, 4.09, 2.57),
      table_row(20, 0.70, 0.16, 1.71, 1.56, 0.12, 0.49, 14, 0.31, 3.45, 1.52),
      table_row(25, 0.26, 0.29, 1.21, 1.35, 0.04, 0.54, 6, 0.49, 2.23, 0.84),
      table_row(30, 0.11, 0.06, 1.27, 1.40, 0.01, 0.46, 2, 0.36, 1.44, 0.36),
      table_row(35, 0.28, 0.07, 1.16, 1.36, 0.01, 0.38, 2, 0.81, 2.21, 0.32),
  };
  return presets;
}

const MudParameters& preset_by_water_percent(int percent) {
  for (const auto& p : builtin_presets()) {
    if (static_cast<int>(std::lround(p.water_content * 100.0)) == percent) return p;
  }
  throw std::invalid_argument("no preset for water content " + std::to_string(percent) + "%");
}

MudParameters parameters_from_json(const nlohmann::json& j) {
  MudParameters p;
  p.k_i = get_scaled(j, "k_i_MPa_per_m", kMegaPa, "k_i_Pa_per_m");
  p.b_i = get_scaled(j, "b_i_MPa_s_per_m", kMegaPa, "b_i_Pa_s_per_m");
  p.k_w = get_scaled(j, "k_w_MPa_per_m", kMegaPa, "k_w_Pa_per_m");
  p.b_w = get_scaled(j, "b_w_MPa_s_per_m", kMegaPa, "b_w_Pa_s_per_m");
  p.alpha = get_scaled(j, "alpha_MPa", kMegaPa, "alpha_Pa");
  p.beta = get_number(j, "beta");
  p.sigma_y = get_scaled(j, "sigma_y_kPa", kKiloPa, "sigma_y_Pa");
  p.zeta = get_number(j, "zeta");
  p.omega0 = get_number(j, "omega0_rad_per_s");
  p.lambda_drag = get_number(j, "lambda_drag");
  p.rho_m = get_number(j, "rho_m_kg_per_m3");
  if (j.contains("water_content")) p.water_content = get_number(j, "water_content");
  if (j.contains("table_rmse_N")) p.table_rmse = get_number(j, "table_rmse_N");
  p.validate();
  return p;
}

nlohmann::json parameters_to_json(const MudParameters& p) {
  nlohmann::json j;
  j["water_content"] = p.water_content;
  j["k_i_MPa_per_m"] = p.k_i / kMegaPa;
  j["b_i_MPa_s_per_m"] = p.b_i / kMegaPa;
  j["k_w_MPa_per_m"] = p.k_w / kMegaPa;
  j["b_w_MPa_s_per_m"] = p.b_w / kMegaPa;
  j["alpha_MPa"] = p.alpha / kMegaPa;
  j["beta"] = p.beta;
  j["sigma_y_kPa"] = p.sigma_y / kKiloPa;
  j["zeta"] = p.zeta;
  j["omega0_rad_per_s"] = p.omega0;
  j["lambda_drag"] = p.lambda_drag;
  j["rho_m_kg_per_m3"] = p.rho_m;
  if (std::isfinite(p.table_rmse)) j["table_rmse_N"] = p.table_rmse;
  return j;
}

IntruderGeometry geometry_from_json(const nlohmann::json& j) {
  IntruderGeometry g;
  g.length = get_number(j, "length_m");
  g.width = get_number(j, "width_m");
  g.height = get_number(j, "height_m");
  g.char_width = j.contains("H_m") ? get_number(j, "H_m") : g.width;
  g.validate();
  return g;
}

nlohmann::json geometry_to_json(const IntruderGeometry& g) {
  nlohmann::json j;
  j["length_m"] = g.length;
  j["width_m"] = g.width;
  j["height_m"] = g.height;
  j["H_m"] = g.char_width;
  return j;
}

ParameterSet load_parameter_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open parameter file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed parameter file " + path.string() + ": " + e.what());
  }
  ParameterSet set;
  set.mud = parameters_from_json(j);
  if (j.contains("geometry")) set.geometry = geometry_from_json(j.at("geometry"));
  return set;
}

void save_parameter_file(const std::filesystem::path& path, const ParameterSet& set,
                         const nlohmann::json& fit_report) {
  nlohmann::json j = parameters_to_json(set.mud);
  j["geometry"] = geometry_to_json(set.geometry);
  if (!fit_report.is_null() && !fit_report.empty()) j["fit_report"] = fit_report;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write parameter file: " + path.string());
  out << j.dump(2) << "\n";
}

PaperUnitsRow paper_units_row(const MudParameters& p) {
  PaperUnitsRow row;
  row.water = fixed(p.water_content * 100.0, 0) + "%";
  row.k_i = fixed(p.k_i / kMegaPa, 2);
  row.b_i = fixed(p.b_i / kMegaPa, 2);
  row.k_w = fixed(p.k_w / kMegaPa, 2);
  row.b_w = fixed(p.b_w / kMegaPa, 2);
  row.alpha = fixed(p.alpha / kMegaPa, 2);
  row.beta = fixed(p.beta, 2);
  row.sigma_y = fixed(p.sigma_y / kKiloPa, 0);
  row.zeta = fixed(p.zeta, 2);
  row.omega0 = fixed(p.omega0, 2);
  row.rmse = std::isfinite(p.table_rmse) ? fixed(p.table_rmse, 2) : std::string("-");
  return row;
}

std::string paper_units_table(const std::vector<MudParameters>& rows) {
  std::ostringstream out;
  out << "W,k_i_MPa_per_m,b_i_MPa_s_per_m,k_w_MPa_per_m,b_w_MPa_s_per_m,"
         "alpha_MPa,beta,sigma_y_kPa,zeta,omega0_rad_per_s,rmse_N\n";
  for (const auto& p : rows) {
    const PaperUnitsRow r = paper_units_row(p);
    out << r.water << ',' << r.k_i << ',' << r.b_i << ',' << r.k_w << ',' << r.b_w << ','
        << r.alpha << ',' << r.beta << ',' << r.sigma_y << ',' << r.zeta << ',' << r.omega0
        << ',' << r.rmse << "\n";
  }
  return out.str();
}

}  // namespace mudsim
