#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fcdn/random.hpp"

namespace fcdn {

struct CatchmentGroup {
  double start_s = 0.0;  // window covers [start, start + tau)
  std::uint64_t members = 0;
};

/// One replication of Poisson requests on [0, T] with non-extending catchment
/// windows opened by the first request after the previous window closed.
struct CatchmentTrace {
  double rate_per_s = 0.0;
  double catchment_s = 0.0;
  double horizon_s = 0.0;
  std::vector<double> arrivals_s;  // sorted
  std::vector<CatchmentGroup> groups;

  double mean_group_size() const;
};

/// Counts only; what the validation needs from a trace.
struct CatchmentSummary {
  double rate_per_s = 0.0;
  double catchment_s = 0.0;
  double horizon_s = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t groups = 0;

  static CatchmentSummary of(const CatchmentTrace& trace);
};

/// Throws Error unless rate > 0 and 0 < tau < T.
CatchmentTrace simulate_catchment(double rate_per_s, double catchment_s, double horizon_s, Rng& rng);

/// Same process without materializing arrivals.
CatchmentSummary simulate_catchment_summary(double rate_per_s, double catchment_s,
                                            double horizon_s, Rng& rng);

struct CatchmentVerdict {
  bool pass = false;
  std::size_t replications = 0;
  double observed_groups = 0.0;
  double expected_groups = 0.0;
  double observed_group_size = 0.0;  // total arrivals / total groups
  double expected_group_size = 0.0;

  double groups_rel_error() const;
  double size_rel_error() const;
};

/// Passes when both means are within rel_tol (relative) of the expectations.
/// Needs at least 100 replications sharing identical parameters.
CatchmentVerdict validate_analytic(std::span<const CatchmentSummary> runs, double expected_groups,
                                   double expected_group_size, double rel_tol);
CatchmentVerdict validate_analytic(std::span<const CatchmentTrace> traces, double expected_groups,
                                   double expected_group_size, double rel_tol);

/// replication,arrivals,groups,mean_size
void write_catchment_table(std::ostream& out, std::span<const CatchmentSummary> runs);

}  // namespace fcdn
