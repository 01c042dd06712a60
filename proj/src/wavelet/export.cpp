#include <cmath>

#include "detail/json_io.hpp"
#include "leaderlab/wavelet.hpp"

namespace leaderlab {

void write_pyramid_json(const std::filesystem::path& path, const CoefficientPyramid& pyramid) {
  nlohmann::ordered_json j;
  j["j_min"] = pyramid.j_min;
  j["j_max"] = pyramid.j_max;
  j["J"] = pyramid.J;
  j["norm"] = "L1";
  j["boundary"] = "periodic";
  nlohmann::ordered_json scales = nlohmann::ordered_json::object();
  for (const auto& [scale, c] : pyramid.coeffs) scales[std::to_string(scale)] = c;
  j["scales"] = std::move(scales);
  nlohmann::ordered_json wrapped = nlohmann::ordered_json::object();
  for (const auto& [scale, k] : pyramid.first_wrapped) wrapped[std::to_string(scale)] = k;
  j["first_wrapped"] = std::move(wrapped);
  detail::write_json(path, j);
}

void write_leaders_json(const std::filesystem::path& path, const LeaderPyramid& leaders) {
  nlohmann::ordered_json j;
  j["j_min"] = leaders.j_min();
  j["j_max"] = leaders.j_max();
  j["variant"] = to_string(leaders.variant);
  j["norm"] = "L1";
  j["boundary"] = "periodic";
  nlohmann::ordered_json scales = nlohmann::ordered_json::object();
  for (const auto& [scale, l] : leaders.leaders) scales[std::to_string(scale)] = l;
  j["scales"] = std::move(scales);
  nlohmann::ordered_json interior = nlohmann::ordered_json::object();
  for (const auto& [scale, r] : leaders.interior) interior[std::to_string(scale)] = {r.first, r.second};
  j["interior"] = std::move(interior);
  detail::write_json(path, j);
}

void write_structure_csv(const std::filesystem::path& path, const StructureFunctionTable& table, int J) {
  auto out = detail::open_output(path);
  out << "j,q,S,logS" << (J >= 0 ? ",octave" : "") << '\n';
  for (std::size_t si = 0; si < table.scales.size(); ++si) {
    for (std::size_t qi = 0; qi < table.q_values.size(); ++qi) {
      const double s = table.s[si][qi];
      out << table.scales[si] << ',' << table.q_values[qi] << ',' << s << ',' << std::log2(s);
      if (J >= 0) out << ',' << J - table.scales[si];
      out << '\n';
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace leaderlab
