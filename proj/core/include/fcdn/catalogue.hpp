#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "fcdn/random.hpp"
#include "fcdn/topology.hpp"

namespace fcdn {

/// Zero-based position in the catalogue; the item's rank is index + 1.
using ItemIndex = std::uint32_t;

struct ContentItem {
  std::uint32_t rank = 1;   // 1-based, most popular first
  double popularity = 0.0;  // phi_i
  double bitrate_mbps = 0;  // eta_i
  double volume_mb = 0;     // zeta_i
};

class Catalogue {
 public:
  Catalogue() = default;
  explicit Catalogue(std::vector<ContentItem> items);

  std::size_t size() const noexcept { return items_.size(); }
  const ContentItem& operator[](ItemIndex i) const { return items_[i]; }
  std::span<const ContentItem> items() const noexcept { return items_; }

  double total_volume_mb() const noexcept { return total_volume_mb_; }
  std::vector<double> popularities() const;

 private:
  std::vector<ContentItem> items_;
  double total_volume_mb_ = 0.0;
};

/// Zipf(s) popularity over n ranked items; bitrate and volume drawn
/// independently and uniformly from the given choice sets.
Catalogue generate_catalogue(std::size_t n, double zipf_exponent,
                             std::span<const double> bitrate_choices_mbps,
                             std::span<const double> volume_choices_mb, Rng& rng);

/// Zipf probabilities i^-s / sum_j j^-s for i = 1..n.
std::vector<double> zipf_probabilities(std::size_t n, double exponent);

/// Per-node population U_v, indexed by Node.
using PopulationTable = std::vector<std::uint64_t>;

struct PopulationFile {
  std::filesystem::path path;
  /// Multiplier applied to every row (1 keeps the table verbatim).
  double scale = 1.0;
};

struct UniformPopulation {
  std::uint64_t total = 0;
};

struct LogNormalPopulation {
  double median = 1000.0;
  double sigma = 1.0;
};

using PopulationSource = std::variant<PopulationFile, UniformPopulation, LogNormalPopulation>;

/// Every node receives U_v >= 1. File rows that name an unknown node, and
/// files that leave a node without a row, are errors.
PopulationTable assign_populations(const NetworkGraph& g, const PopulationSource& source, Rng& rng);

/// Reads `node_id,population` rows (header optional).
PopulationTable read_population_table(const NetworkGraph& g, std::istream& in, double scale = 1.0);

/// m[s,i]: active clients at node s subscribed to item i.
class DemandMatrix {
 public:
  DemandMatrix() = default;
  DemandMatrix(std::size_t nodes, std::size_t items);

  std::size_t node_count() const noexcept { return nodes_; }
  std::size_t item_count() const noexcept { return items_; }

  std::uint32_t at(Node s, ItemIndex i) const { return cells_[index(s, i)]; }
  void set(Node s, ItemIndex i, std::uint32_t m) { cells_[index(s, i)] = m; }
  std::span<const std::uint32_t> row(Node s) const {
    return std::span<const std::uint32_t>(cells_).subspan(static_cast<std::size_t>(s) * items_,
                                                          items_);
  }
  /// M_s
  std::uint64_t node_total(Node s) const;
  std::uint64_t total() const;

  bool operator==(const DemandMatrix&) const = default;

 private:
  std::size_t index(Node s, ItemIndex i) const { return static_cast<std::size_t>(s) * items_ + i; }

  std::size_t nodes_ = 0;
  std::size_t items_ = 0;
  std::vector<std::uint32_t> cells_;
};

/// Per node s, a_s = round(active_fraction * U_s) clients split across items
/// by a multinomial draw with probabilities phi.
DemandMatrix generate_demand(const Catalogue& catalogue, const PopulationTable& populations,
                             double active_fraction, Rng& rng);

/// Sum over s,i of eta_i * m[s,i], in Gb/s.
double offered_demand_gbps(const Catalogue& catalogue, const DemandMatrix& demand);

void write_catalogue_table(std::ostream& out, const Catalogue& catalogue);
/// One row per node-item pair with positive demand.
void write_demand_table(std::ostream& out, const NetworkGraph& g, const DemandMatrix& demand);

}  // namespace fcdn
