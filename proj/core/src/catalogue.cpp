#include "fcdn/catalogue.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <string>

#include "fcdn/error.hpp"

namespace fcdn {

Catalogue::Catalogue(std::vector<ContentItem> items) : items_(std::move(items)) {
  for (const auto& item : items_) {
    if (!(item.bitrate_mbps > 0.0) || !(item.volume_mb > 0.0)) {
      throw Error("catalogue item " + std::to_string(item.rank) +
                  " must have positive bitrate and volume");
    }
    total_volume_mb_ += item.volume_mb;
  }
}

std::vector<double> Catalogue::popularities() const {
  std::vector<double> out;
  out.reserve(items_.size());
  for (const auto& item : items_) out.push_back(item.popularity);
  return out;
}

std::vector<double> zipf_probabilities(std::size_t n, double exponent) {
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::pow(static_cast<double>(i + 1), -exponent);
  }
  // Sum smallest terms first.
  const double norm = std::accumulate(p.rbegin(), p.rend(), 0.0);
  for (auto& x : p) x /= norm;
  return p;
}

Catalogue generate_catalogue(std::size_t n, double zipf_exponent,
                             std::span<const double> bitrate_choices_mbps,
                             std::span<const double> volume_choices_mb, Rng& rng) {
  if (n == 0) throw Error("catalogue must contain at least one item");
  if (zipf_exponent < 0.0) throw Error("zipf exponent must be non-negative");
  if (bitrate_choices_mbps.empty()) throw Error("bitrate choice set is empty");
  if (volume_choices_mb.empty()) throw Error("volume choice set is empty");

  auto pick = [&rng](std::span<const double> choices) {
    const auto k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(choices.size()));
    return choices[std::min(k, choices.size() - 1)];
  };

  const auto phi = zipf_probabilities(n, zipf_exponent);
  std::vector<ContentItem> items(n);
  for (std::size_t i = 0; i < n; ++i) {
    items[i].rank = static_cast<std::uint32_t>(i + 1);
    items[i].popularity = phi[i];
    items[i].bitrate_mbps = pick(bitrate_choices_mbps);
    items[i].volume_mb = pick(volume_choices_mb);
  }
  return Catalogue(std::move(items));
}

PopulationTable read_population_table(const NetworkGraph& g, std::istream& in, double scale) {
  if (!(scale > 0.0)) throw Error("population scale must be positive");
  PopulationTable table(g.node_count(), 0);
  std::vector<bool> seen(g.node_count(), false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error("population table line " + std::to_string(line_no) + ": expected node_id,population");
    }
    const auto id = line.substr(0, comma);
    const auto value = line.substr(comma + 1);
    double count = 0.0;
    try {
      std::size_t used = 0;
      count = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // header row
      throw Error("population table line " + std::to_string(line_no) + ": bad count '" + value + "'");
    }
    auto v = g.find(id);
    if (!v) {
      throw Error("population table line " + std::to_string(line_no) + " references unknown node '" +
                  id + "'");
    }
    if (count < 0.0) throw Error("population of node '" + id + "' is negative");
    table[*v] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(count * scale)));
    seen[*v] = true;
  }
  for (Node v = 0; v < g.node_count(); ++v) {
    if (!seen[v]) throw Error("population table has no row for node '" + g.id(v) + "'");
  }
  return table;
}

PopulationTable assign_populations(const NetworkGraph& g, const PopulationSource& source, Rng& rng) {
  const auto n = g.node_count();
  return std::visit(
      [&](const auto& spec) -> PopulationTable {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, PopulationFile>) {
          std::ifstream in(spec.path);
          if (!in) throw Error("cannot open population table " + spec.path.string());
          return read_population_table(g, in, spec.scale);
        } else if constexpr (std::is_same_v<T, UniformPopulation>) {
          if (n == 0) return {};
          // Remainder goes to the lowest ids so the total is exact.
          PopulationTable table(n, spec.total / n);
          for (std::size_t v = 0; v < spec.total % n; ++v) ++table[v];
          for (auto& u : table) u = std::max<std::uint64_t>(u, 1);
          return table;
        } else {
          if (!(spec.median > 0.0) || spec.sigma < 0.0) {
            throw Error("log-normal population needs median > 0 and sigma >= 0");
          }
          std::normal_distribution<double> normal(std::log(spec.median), spec.sigma);
          PopulationTable table(n);
          for (auto& u : table) {
            u = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(std::exp(normal(rng)))));
          }
          return table;
        }
      },
      source);
}

DemandMatrix::DemandMatrix(std::size_t nodes, std::size_t items)
    : nodes_(nodes), items_(items), cells_(nodes * items, 0) {}

std::uint64_t DemandMatrix::node_total(Node s) const {
  auto r = row(s);
  return std::accumulate(r.begin(), r.end(), std::uint64_t{0});
}

std::uint64_t DemandMatrix::total() const {
  return std::accumulate(cells_.begin(), cells_.end(), std::uint64_t{0});
}

DemandMatrix generate_demand(const Catalogue& catalogue, const PopulationTable& populations,
                             double active_fraction, Rng& rng) {
  if (active_fraction < 0.0 || active_fraction > 1.0) {
    throw Error("active fraction must lie in [0, 1]");
  }
  const auto items = catalogue.size();
  DemandMatrix demand(populations.size(), items);
  for (Node s = 0; s < populations.size(); ++s) {
    auto remaining = static_cast<std::uint64_t>(
        std::llround(active_fraction * static_cast<double>(populations[s])));
    // Multinomial as a chain of conditional binomials.
    double mass_left = 1.0;
    for (ItemIndex i = 0; i < items && remaining > 0; ++i) {
      std::uint64_t draw = remaining;
      if (i + 1 < items) {
        const double p = std::clamp(catalogue[i].popularity / mass_left, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> binomial(remaining, p);
        draw = binomial(rng);
      }
      demand.set(s, i, static_cast<std::uint32_t>(draw));
      remaining -= draw;
      mass_left -= catalogue[i].popularity;
    }
  }
  return demand;
}

double offered_demand_gbps(const Catalogue& catalogue, const DemandMatrix& demand) {
  double mbps = 0.0;
  for (Node s = 0; s < demand.node_count(); ++s) {
    auto r = demand.row(s);
    for (ItemIndex i = 0; i < r.size(); ++i) {
      mbps += catalogue[i].bitrate_mbps * r[i];
    }
  }
  return mbps / 1000.0;
}

void write_catalogue_table(std::ostream& out, const Catalogue& catalogue) {
  out << "rank,popularity,bitrate_mbps,volume_mb\n";
  for (const auto& item : catalogue.items()) {
    out << item.rank << ',' << item.popularity << ',' << item.bitrate_mbps << ','
        << item.volume_mb << '\n';
  }
}

void write_demand_table(std::ostream& out, const NetworkGraph& g, const DemandMatrix& demand) {
  out << "node_id,rank,clients\n";
  for (Node s = 0; s < demand.node_count(); ++s) {
    auto r = demand.row(s);
    for (ItemIndex i = 0; i < r.size(); ++i) {
      if (r[i] > 0) out << g.id(s) << ',' << (i + 1) << ',' << r[i] << '\n';
    }
  }
}

}  // namespace fcdn
