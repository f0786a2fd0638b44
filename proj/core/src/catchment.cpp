#include "fcdn/catchment.hpp"

#include <cmath>
#include <ostream>

#include "fcdn/error.hpp"

namespace fcdn {

namespace {

void check(double rate, double tau, double horizon) {
  if (!(rate > 0.0)) throw Error("arrival rate must be positive");
  if (!(tau > 0.0) || !(tau < horizon)) throw Error("catchment interval must satisfy 0 < tau < T");
}

// Drives the process and reports every arrival as (time, opened_new_group).
template <class OnArrival>
void run_process(double rate, double tau, double horizon, Rng& rng, OnArrival&& on_arrival) {
  check(rate, tau, horizon);
  double t = 0.0;
  double window_end = -1.0;
  bool open = false;
  while (true) {
    t += exponential(rng, rate);
    if (t > horizon) break;
    // An arrival at exactly the closing instant starts a new window.
    const bool opens = !open || t >= window_end;
    if (opens) {
      open = true;
      window_end = t + tau;
    }
    on_arrival(t, opens);
  }
}

}  // namespace

double CatchmentTrace::mean_group_size() const {
  return groups.empty() ? 0.0 : static_cast<double>(arrivals_s.size()) / static_cast<double>(groups.size());
}

CatchmentSummary CatchmentSummary::of(const CatchmentTrace& trace) {
  return {trace.rate_per_s, trace.catchment_s, trace.horizon_s, trace.arrivals_s.size(),
          trace.groups.size()};
}

CatchmentTrace simulate_catchment(double rate_per_s, double catchment_s, double horizon_s, Rng& rng) {
  CatchmentTrace trace{rate_per_s, catchment_s, horizon_s, {}, {}};
  run_process(rate_per_s, catchment_s, horizon_s, rng, [&](double t, bool opens) {
    trace.arrivals_s.push_back(t);
    if (opens) trace.groups.push_back({t, 0});
    ++trace.groups.back().members;
  });
  return trace;
}

CatchmentSummary simulate_catchment_summary(double rate_per_s, double catchment_s,
                                            double horizon_s, Rng& rng) {
  CatchmentSummary s{rate_per_s, catchment_s, horizon_s, 0, 0};
  run_process(rate_per_s, catchment_s, horizon_s, rng, [&](double, bool opens) {
    ++s.arrivals;
    if (opens) ++s.groups;
  });
  return s;
}

double CatchmentVerdict::groups_rel_error() const {
  return std::abs(observed_groups - expected_groups) / expected_groups;
}

double CatchmentVerdict::size_rel_error() const {
  return std::abs(observed_group_size - expected_group_size) / expected_group_size;
}

CatchmentVerdict validate_analytic(std::span<const CatchmentSummary> runs, double expected_groups,
                                   double expected_group_size, double rel_tol) {
  if (runs.size() < 100) throw Error("analytic validation needs at least 100 replications");
  if (!(expected_groups > 0.0) || !(expected_group_size > 0.0) || rel_tol < 0.0) {
    throw Error("expectations must be positive and tolerance non-negative");
  }
  const auto& first = runs.front();
  std::uint64_t arrivals = 0;
  std::uint64_t groups = 0;
  for (const auto& r : runs) {
    if (r.rate_per_s != first.rate_per_s || r.catchment_s != first.catchment_s ||
        r.horizon_s != first.horizon_s) {
      throw Error("replications were generated with different parameters");
    }
    arrivals += r.arrivals;
    groups += r.groups;
  }
  CatchmentVerdict v;
  v.replications = runs.size();
  v.expected_groups = expected_groups;
  v.expected_group_size = expected_group_size;
  v.observed_groups = static_cast<double>(groups) / static_cast<double>(runs.size());
  v.observed_group_size = groups == 0 ? 0.0 : static_cast<double>(arrivals) / static_cast<double>(groups);
  v.pass = v.groups_rel_error() <= rel_tol && v.size_rel_error() <= rel_tol;
  return v;
}

CatchmentVerdict validate_analytic(std::span<const CatchmentTrace> traces, double expected_groups,
                                   double expected_group_size, double rel_tol) {
  std::vector<CatchmentSummary> runs;
  runs.reserve(traces.size());
  for (const auto& t : traces) runs.push_back(CatchmentSummary::of(t));
  return validate_analytic(runs, expected_groups, expected_group_size, rel_tol);
}

void write_catchment_table(std::ostream& out, std::span<const CatchmentSummary> runs) {
  out << "replication,arrivals,groups,mean_size\n";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto& r = runs[k];
    const double mean = r.groups == 0 ? 0.0 : static_cast<double>(r.arrivals) / static_cast<double>(r.groups);
    out << k << ',' << r.arrivals << ',' << r.groups << ',' << mean << '\n';
  }
}

}  // namespace fcdn
