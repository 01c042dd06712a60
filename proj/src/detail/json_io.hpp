#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "leaderlab/core.hpp"

namespace leaderlab::detail {

inline nlohmann::ordered_json rng_json(const RngSpec& rng) {
  return {{"seed", rng.seed}, {"stream_id", rng.stream_id}};
}

// JSON has no infinities; they are written as the strings "inf" / "-inf".
inline nlohmann::ordered_json real_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.precision(17);
  return out;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  auto out = open_output(path);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace leaderlab::detail
