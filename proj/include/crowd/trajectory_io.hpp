#pragma once

#include <string>

#include "crowd/dynamics.hpp"

namespace crowd {

inline constexpr const char* kToolVersion = "0.1.0";

std::string trajectory_manifest_path(const std::string& csv_path);

// header t,agent_id,group,x,y,vx,vy; floats carry 17 significant digits so the
// read side recovers them bit-exactly; writes the sibling manifest as well
void write_trajectory_csv(const Trajectory& t, const std::string& csv_path);

// requires the sibling manifest written by write_trajectory_csv
Trajectory read_trajectory_csv(const std::string& csv_path);

}  // namespace crowd
