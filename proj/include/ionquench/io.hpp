#pragma once

#include <iomanip>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "ionquench/equilibrium.hpp"
#include "ionquench/errors.hpp"
#include "ionquench/model.hpp"

namespace ionq {

inline constexpr int kProfileSchemaVersion = 1;
inline constexpr int kSnapshotSchemaVersion = 1;

inline nlohmann::json profile_to_json(const ChainProfile& p) {
  return {{"schema_version", kProfileSchemaVersion},
          {"positions", p.positions},
          {"L", p.half_length},
          {"L_outer", p.outermost},
          {"a0", p.central_spacing},
          {"omega0", p.omega0},
          {"nu_c0_sq", p.nu_c0_sq}};
}

inline ChainProfile profile_from_json(const nlohmann::json& j) {
  if (!j.contains("schema_version") ||
      j.at("schema_version").get<int>() != kProfileSchemaVersion)
    throw ConfigError("unsupported chain profile schema version");
  ChainProfile p;
  j.at("positions").get_to(p.positions);
  j.at("L").get_to(p.half_length);
  j.at("L_outer").get_to(p.outermost);
  j.at("a0").get_to(p.central_spacing);
  j.at("omega0").get_to(p.omega0);
  j.at("nu_c0_sq").get_to(p.nu_c0_sq);
  return p;
}

// Snapshot table: header lines, then one row per sample:
//   t x_1..x_N y_1..y_N vx_1..vx_N vy_1..vy_N
inline void write_snapshot_header(std::ostream& os, std::size_t n_ions) {
  os << "# ionquench snapshot v" << kSnapshotSchemaVersion << "\n"
     << "# columns: t x[1.." << n_ions << "] y[1.." << n_ions << "] vx[1.."
     << n_ions << "] vy[1.." << n_ions << "]\n";
}

inline void write_snapshot_row(std::ostream& os, const IonState& s) {
  os << std::setprecision(17) << s.t;
  for (double v : s.x) os << ' ' << v;
  for (double v : s.y) os << ' ' << v;
  for (double v : s.vx) os << ' ' << v;
  for (double v : s.vy) os << ' ' << v;
  os << '\n';
}

}  // namespace ionq
