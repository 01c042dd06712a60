#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "detail/json_io.hpp"
#include "leaderlab/cli.hpp"

namespace leaderlab::cli {

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["argv"] = argv;
  j["params"] = params;
  j["seed"] = seed ? detail::rng_json(*seed) : nullptr;
  j["tool_version"] = tool_version;
  j["timestamps"] = {{"start", start_time}, {"end", end_time}};
  nlohmann::ordered_json in = nlohmann::ordered_json::array();
  for (const InputRecord& r : inputs) in.push_back({{"path", r.path}, {"fnv1a64", r.fnv1a64}});
  j["inputs"] = std::move(in);
  j["outputs"] = outputs;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::ordered_json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.params = j.value("params", nlohmann::ordered_json::object());
    if (j.contains("seed") && !j["seed"].is_null()) {
      m.seed = RngSpec{j["seed"].at("seed").get<std::uint64_t>(), j["seed"].at("stream_id").get<std::uint64_t>()};
    }
    m.tool_version = j.value("tool_version", std::string{});
    if (j.contains("inputs")) {
      for (const auto& r : j["inputs"]) m.inputs.push_back({r.at("path").get<std::string>(), r.at("fnv1a64").get<std::string>()});
    }
    if (j.contains("outputs")) m.outputs = j["outputs"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("manifest: malformed record: ") + e.what());
  }
  return m;
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  try {
    return from_json(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("manifest " + path.string() + ": " + e.what());
  }
}

std::string fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

StagingDir::StagingDir() {
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::ostringstream name;
    name << "leaderlab-" << std::hex << rd() << rd();
    root_ = base / name.str();
    if (std::filesystem::create_directory(root_)) return;
  }
  throw DataError("cannot create a staging directory under " + base.string());
}

StagingDir::~StagingDir() {
  std::error_code ec;
  std::filesystem::remove_all(root_, ec);
}

std::filesystem::path StagingDir::file(const std::string& name) {
  outputs_.push_back(name);
  return root_ / name;
}

void StagingDir::commit(const std::filesystem::path& dir, RunManifest manifest) {
  std::filesystem::create_directories(dir);
  for (const std::string& name : outputs_) {
    const auto target = dir / name;
    std::filesystem::copy_file(root_ / name, target, std::filesystem::copy_options::overwrite_existing);
  }
  manifest.outputs = outputs_;
  manifest.end_time = utc_timestamp();
  detail::write_json(dir / "manifest.json", manifest.to_json());
}

}  // namespace leaderlab::cli
