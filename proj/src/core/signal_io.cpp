#include "leaderlab/core.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace leaderlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string s = trim(text);
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Signal read_signal_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("signal csv: cannot open " + path.string());

  Signal sig;
  sig.label = path.stem().string();
  std::vector<double> times;
  bool two_column = false;
  bool first_line = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (first_line) {
      first_line = false;
      if (comma != std::string::npos) {
        const std::string a = trim(line.substr(0, comma));
        double tmp;
        if (!parse_double(a, tmp)) {
          if (a != "t" || trim(line.substr(comma + 1)) != "value") {
            throw DataError("signal csv: expected header `t,value` in " + path.string());
          }
          two_column = true;
          continue;
        }
        two_column = true;
      } else {
        double tmp;
        if (!parse_double(line, tmp)) continue;  // tolerate a one-word header
      }
    }
    double t = 0.0, v = 0.0;
    if (two_column) {
      if (comma == std::string::npos || !parse_double(line.substr(0, comma), t) ||
          !parse_double(line.substr(comma + 1), v)) {
        throw DataError("signal csv: malformed row at line " + std::to_string(line_no));
      }
      times.push_back(t);
    } else if (comma != std::string::npos || !parse_double(line, v)) {
      throw DataError("signal csv: malformed row at line " + std::to_string(line_no));
    }
    sig.samples.push_back(v);
  }

  if (two_column && times.size() >= 2) {
    sig.t0 = times.front();
    sig.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  }
  try {
    sig.validate();
  } catch (const InvalidArgument& e) {
    throw DataError(std::string(e.what()) + " (" + path.string() + ")");
  }
  return sig;
}

void write_signal_csv(const std::filesystem::path& path, const Signal& signal) {
  std::ofstream out(path);
  if (!out) throw DataError("signal csv: cannot write " + path.string());
  out << "t,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < signal.samples.size(); ++i) {
    out << signal.t0 + static_cast<double>(i) * signal.dt << ',' << signal.samples[i] << '\n';
  }
  if (!out) throw DataError("signal csv: write failed for " + path.string());
}

}  // namespace leaderlab
