#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace mudsim {

enum class Regime { Intrusion, Withdrawal };

/// Material constants of the visco-elasto-plastic mud model plus the
/// separately calibrated drag constants. Everything is stored in SI
/// (Pa, Pa·s/m, rad/s, kg/m³); parameter files carry the MPa/kPa units of
/// the published calibration table and are converted on load.
struct MudParameters {
  double k_i = 0.0;          ///< intrusion stiffness, Pa/m
  double b_i = 0.0;          ///< intrusion damping, Pa·s/m
  double k_w = 0.0;          ///< withdrawal stiffness, Pa/m
  double b_w = 0.0;          ///< withdrawal damping, Pa·s/m
  double alpha = 0.0;        ///< bulk-spring stiffness, Pa
  double beta = 0.0;         ///< bulk-spring exponent, in (0, 1]
  double sigma_y = 0.0;      ///< yield stress triggering necking, Pa
  double zeta = 0.0;         ///< necking-filter damping ratio
  double omega0 = 0.0;       ///< necking-filter natural frequency, rad/s
  double lambda_drag = 0.0;  ///< inertial-drag scaling factor
  double rho_m = 0.0;        ///< mud mass density, kg/m³

  /// Volumetric water fraction label W; informational only.
  double water_content = 0.0;
  /// Published fit RMSE for this row, N; informational only.
  double table_rmse = std::numeric_limits<double>::quiet_NaN();

  double stiffness(Regime r) const { return r == Regime::Intrusion ? k_i : k_w; }
  double damping(Regime r) const { return r == Regime::Intrusion ? b_i : b_w; }

  /// Maxwell relaxation time tau = b/k for the given regime, s.
  double relaxation_time(Regime r) const { return damping(r) / stiffness(r); }

  /// Throws std::invalid_argument when any value is out of range.
  void validate() const;
};

/// Cuboid intruder. Depth z is measured downward from the undisturbed mud
/// surface, so z > 0 means submerged.
struct IntruderGeometry {
  double length = 0.051;  ///< m
  double width = 0.038;   ///< m
  double height = 0.025;  ///< m

  /// Characteristic width H of the bulk-spring law. Defaults to the cuboid
  /// width; the reference 51x38x25 mm intruder does not pin down which
  /// dimension counts as "width", so it stays configurable.
  double char_width = 0.038;

  double contact_area() const { return length * width; }
  void validate() const;
};

struct ParameterSet {
  MudParameters mud;
  IntruderGeometry geometry;
};

/// The five shipped water-content presets (W = 15..35 %), in SI.
const std::vector<MudParameters>& builtin_presets();

/// Throws std::invalid_argument for an unknown percent.
const MudParameters& preset_by_water_percent(int percent);

// Parameter files are JSON key-value documents mirroring the field names,
// with explicit unit suffixes in the keys (k_i_MPa_per_m, sigma_y_kPa, ...).
// SI-suffixed keys (k_i_Pa_per_m, sigma_y_Pa, ...) are accepted on load.
MudParameters parameters_from_json(const nlohmann::json& j);
nlohmann::json parameters_to_json(const MudParameters& p);
IntruderGeometry geometry_from_json(const nlohmann::json& j);
nlohmann::json geometry_to_json(const IntruderGeometry& g);

ParameterSet load_parameter_file(const std::filesystem::path& path);
void save_parameter_file(const std::filesystem::path& path, const ParameterSet& set,
                         const nlohmann::json& fit_report = nlohmann::json());

/// One calibration-table row rendered in publication units and print
/// formats (MPa / kPa, two decimals, integral kPa yield stress).
struct PaperUnitsRow {
  std::string water, k_i, b_i, k_w, b_w, alpha, beta, sigma_y, zeta, omega0, rmse;
};

PaperUnitsRow paper_units_row(const MudParameters& p);
std::string paper_units_table(const std::vector<MudParameters>& rows);

}  // namespace mudsim
