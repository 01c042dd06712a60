#include "detail/json_io.hpp"
#include "leaderlab/cumulants.hpp"

namespace leaderlab {

namespace {

nlohmann::ordered_json ci_json(const EstimateWithCI& ci) {
  nlohmann::ordered_json j{{"estimate", ci.estimate}, {"stderr", ci.stderr_}, {"lower", ci.lower},
                           {"upper", ci.upper},       {"level", ci.level},   {"method", to_string(ci.method)}};
  if (ci.method == CiMethod::bootstrap_percentile) j["B"] = ci.n_replicates;
  return j;
}

}  // namespace

void write_estimate_json(const std::filesystem::path& path, const C1C2Estimate& est, ScaleRange range,
                         std::size_t n_realizations, const RngSpec* seed) {
  nlohmann::ordered_json j;
  j["c1"] = ci_json(est.c1);
  j["c2"] = ci_json(est.c2);
  j["j_range"] = {range.j1, range.j2};
  j["N"] = n_realizations;
  j["seed"] = seed ? detail::rng_json(*seed) : nullptr;
  j["c2_mean_divisor_n"] = est.c2_mean_divisor_n;
  j["c2_mean_divisor_n_minus_1"] = est.c2_mean_divisor_n_minus_1;
  j["c1_samples"] = est.c1_samples;
  j["c2_samples"] = est.c2_samples;
  j["warnings"] = est.warnings;
  detail::write_json(path, j);
}

void write_estimate_csv(const std::filesystem::path& path, const C1C2Estimate& est, const std::string& label) {
  auto out = detail::open_output(path);
  out << "label,parameter,method,estimate,LB,UB,UB-LB\n";
  for (const auto& [name, ci] : {std::pair{"c1", &est.c1}, std::pair{"c2", &est.c2}}) {
    out << label << ',' << name << ',' << to_string(ci->method) << ',' << ci->estimate << ',' << ci->lower << ','
        << ci->upper << ',' << (ci->upper - ci->lower) << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace leaderlab
