#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fcdn/error.hpp"
#include "fcdn/experiment.hpp"

#ifndef FCDN_VERSION
#define FCDN_VERSION "0.0.0"
#endif

namespace fcdn {

namespace {

constexpr std::array<std::string_view, 19> kMetricsColumns{
    "system",          "algorithm",           "K_o",
    "K_e",             "K_d",                 "tau",
    "T",               "trial",               "offered_demand_gbps",
    "total_backhaul_gbps", "max_publisher_gbps", "theoretical_mb",
    "cached_mb",       "advertised_not_cached_mb", "multicast_gain",
    "client_paths",    "zero_path_fraction",  "mean_path_hops",
    "max_path_hops"};

// Shortest text that reads back to the same double.
std::string num(double x) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf.data(), end);
}

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return num(*v);
  } else {
    return std::to_string(*v);
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error("bad number '" + s + "' in results");
  return x;
}

std::uint64_t parse_uint(const std::string& s) {
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error("bad integer '" + s + "' in results");
  return x;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  return in;
}

}  // namespace

std::span<const std::string_view> metrics_columns() { return kMetricsColumns; }

std::string_view software_version() noexcept { return FCDN_VERSION; }

void emit_results(const ResultsDataset& dataset, const ExperimentConfig& config,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  auto metrics = open_out(dir / "metrics.csv");
  for (std::size_t c = 0; c < kMetricsColumns.size(); ++c) {
    metrics << (c ? "," : "") << kMetricsColumns[c];
  }
  metrics << '\n';
  for (const auto& r : dataset.rows) {
    metrics << to_string(r.system) << ',' << to_string(r.algorithm) << ',' << r.K_o << ',' << r.K_e
            << ',' << opt(r.K_d) << ',' << opt(r.tau) << ',' << opt(r.T) << ',' << r.trial << ','
            << num(r.offered_demand_gbps) << ',' << num(r.total_backhaul_gbps) << ','
            << num(r.max_publisher_gbps) << ',' << num(r.theoretical_mb) << ',' << num(r.cached_mb)
            << ',' << num(r.advertised_not_cached_mb) << ',' << num(r.multicast_gain) << ','
            << r.client_paths() << ',' << num(r.zero_path_fraction()) << ','
            << num(r.mean_path_hops()) << ',' << r.max_path_hops() << '\n';
  }

  // Path-length distribution per metrics row (row = 0-based data line).
  auto paths = open_out(dir / "ecdf.csv");
  paths << "row,hops,clients,relations,cum_client_fraction,cum_relation_fraction\n";
  for (std::size_t k = 0; k < dataset.rows.size(); ++k) {
    const auto& r = dataset.rows[k];
    std::uint64_t total_rel = 0;
    for (auto x : r.relations_by_hops) total_rel += x;
    const auto total_cli = r.client_paths();
    std::uint64_t cum_cli = 0;
    std::uint64_t cum_rel = 0;
    for (std::size_t h = 0; h < r.clients_by_hops.size(); ++h) {
      cum_cli += r.clients_by_hops[h];
      cum_rel += r.relations_by_hops[h];
      paths << k << ',' << h << ',' << r.clients_by_hops[h] << ',' << r.relations_by_hops[h] << ','
            << num(total_cli ? static_cast<double>(cum_cli) / static_cast<double>(total_cli) : 0.0)
            << ','
            << num(total_rel ? static_cast<double>(cum_rel) / static_cast<double>(total_rel) : 0.0)
            << '\n';
    }
  }

  nlohmann::ordered_json manifest;
  manifest["software"] = "fcdn";
  manifest["version"] = software_version();
  manifest["master_seed"] = config.master_seed;
  manifest["rows"] = dataset.rows.size();
  manifest["files"] = {"metrics.csv", "ecdf.csv"};
  manifest["config"] = nlohmann::ordered_json::parse(config_to_json(config));
  manifest["diagnostics"] = dataset.diagnostics;
  open_out(dir / "manifest.json") << manifest.dump(2) << '\n';
}

ResultsDataset read_results(const std::filesystem::path& dir) {
  ResultsDataset out;

  auto metrics = open_in(dir / "metrics.csv");
  std::string line;
  if (!std::getline(metrics, line)) throw Error("metrics.csv is empty");
  while (std::getline(metrics, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != kMetricsColumns.size()) throw Error("metrics.csv row has the wrong column count");
    ResultRow r;
    r.system = parse_system(f[0]);
    r.algorithm = parse_algorithm(f[1]);
    r.K_o = static_cast<std::uint32_t>(parse_uint(f[2]));
    r.K_e = static_cast<std::uint32_t>(parse_uint(f[3]));
    if (!f[4].empty()) r.K_d = static_cast<std::uint32_t>(parse_uint(f[4]));
    if (!f[5].empty()) r.tau = parse_double(f[5]);
    if (!f[6].empty()) r.T = parse_double(f[6]);
    r.trial = static_cast<std::uint32_t>(parse_uint(f[7]));
    r.offered_demand_gbps = parse_double(f[8]);
    r.total_backhaul_gbps = parse_double(f[9]);
    r.max_publisher_gbps = parse_double(f[10]);
    r.theoretical_mb = parse_double(f[11]);
    r.cached_mb = parse_double(f[12]);
    r.advertised_not_cached_mb = parse_double(f[13]);
    r.multicast_gain = parse_double(f[14]);
    out.rows.push_back(std::move(r));
  }

  auto paths = open_in(dir / "ecdf.csv");
  std::getline(paths, line);
  while (std::getline(paths, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) throw Error("ecdf.csv row has the wrong column count");
    const auto row = parse_uint(f[0]);
    const auto h = parse_uint(f[1]);
    if (row >= out.rows.size()) throw Error("ecdf.csv refers to a missing metrics row");
    auto& r = out.rows[row];
    if (r.clients_by_hops.size() != h) throw Error("ecdf.csv hop counts are not contiguous");
    r.clients_by_hops.push_back(parse_uint(f[2]));
    r.relations_by_hops.push_back(parse_uint(f[3]));
  }

  auto manifest_in = open_in(dir / "manifest.json");
  const auto manifest = nlohmann::json::parse(manifest_in, nullptr, false);
  if (manifest.is_discarded()) throw Error("manifest.json is not valid JSON");
  if (manifest.contains("diagnostics")) {
    out.diagnostics = manifest.at("diagnostics").get<std::vector<std::string>>();
  }
  return out;
}

}  // namespace fcdn
