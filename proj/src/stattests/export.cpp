#include "detail/json_io.hpp"
#include "leaderlab/stattests.hpp"

namespace leaderlab {

std::string report_json(const TestReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  j["statistic"] = detail::real_json(report.statistic);
  j["p_value"] = report.p_value ? detail::real_json(*report.p_value) : nullptr;
  j["threshold"] = report.threshold ? detail::real_json(*report.threshold) : nullptr;
  j["alpha"] = report.alpha;
  j["rejected"] = report.rejected;
  j["n"] = report.n;
  j["n_input"] = report.n_input;
  j["subsampled"] = report.subsampled;
  j["B"] = report.B ? nlohmann::ordered_json(*report.B) : nullptr;
  j["replicates_run"] = report.replicates_run ? nlohmann::ordered_json(*report.replicates_run) : nullptr;
  j["seed"] = detail::rng_json(report.seed);
  return j.dump(2);
}

void write_test_rows_csv(const std::filesystem::path& path, std::span<const TestRow> rows) {
  auto out = detail::open_output(path);
  out << "signal,scale,test,statistic,p_or_T,threshold,rejected\n";
  for (const TestRow& row : rows) {
    const TestReport& r = row.report;
    out << row.signal << ',' << row.scale << ',' << r.name << ',' << r.statistic << ',';
    out << (r.p_value ? *r.p_value : r.statistic) << ',';
    if (r.threshold) out << *r.threshold;
    out << ',' << (r.rejected ? 1 : 0) << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace leaderlab
