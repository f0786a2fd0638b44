#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fcdn/capacity.hpp"
#include "fcdn/catchment.hpp"
#include "fcdn/error.hpp"

using namespace fcdn;

namespace {

std::vector<CatchmentSummary> replicate(double mu, double tau, double T, std::size_t reps,
                                        std::uint64_t seed) {
  std::vector<CatchmentSummary> out;
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(derive_seed(seed, {r}));
    out.push_back(simulate_catchment_summary(mu, tau, T, rng));
  }
  return out;
}

}  // namespace

TEST(Catchment, TraceInvariants) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const double mu = 0.05 + static_cast<double>(seed % 17);
    const double tau = 0.1 + static_cast<double>(seed % 7);
    const double T = 100.0;
    const auto trace = simulate_catchment(mu, tau, T, rng);

    EXPECT_TRUE(std::is_sorted(trace.arrivals_s.begin(), trace.arrivals_s.end()));
    for (double t : trace.arrivals_s) {
      EXPECT_GE(t, 0.0);
      EXPECT_LE(t, T);
    }
    EXPECT_LE(trace.groups.size(), trace.arrivals_s.size());
    EXPECT_LE(trace.groups.size(), static_cast<std::size_t>(std::ceil(T / tau)) + 1);

    // Re-derive membership from the arrivals and window starts alone.
    std::uint64_t members = 0;
    std::size_t k = 0;
    for (std::size_t g = 0; g < trace.groups.size(); ++g) {
      const auto& group = trace.groups[g];
      if (g > 0) EXPECT_GE(group.start_s, trace.groups[g - 1].start_s + tau);
      ASSERT_LT(k, trace.arrivals_s.size());
      EXPECT_EQ(trace.arrivals_s[k], group.start_s);
      std::uint64_t inside = 0;
      while (k < trace.arrivals_s.size() && trace.arrivals_s[k] < group.start_s + tau) {
        ++inside;
        ++k;
      }
      EXPECT_EQ(inside, group.members);
      members += group.members;
    }
    EXPECT_EQ(k, trace.arrivals_s.size());
    EXPECT_EQ(members, trace.arrivals_s.size());
    EXPECT_EQ(CatchmentSummary::of(trace).groups, trace.groups.size());
  }
}

TEST(Catchment, SummaryMatchesTraceForSameSeed) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng a(seed), b(seed);
    const auto trace = simulate_catchment(2.0, 0.5, 300, a);
    const auto summary = simulate_catchment_summary(2.0, 0.5, 300, b);
    EXPECT_EQ(summary.arrivals, trace.arrivals_s.size());
    EXPECT_EQ(summary.groups, trace.groups.size());
  }
}

TEST(Catchment, EmptyAndSwallowedHorizons) {
  int nonempty = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(seed);
    nonempty += simulate_catchment_summary(1e-9, 1, 900, rng).groups > 0;
  }
  EXPECT_LE(nonempty, 1);

  // The first arrival almost surely comes later than 1e-9 s, so a window
  // of T - 1e-9 runs past the horizon.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto trace = simulate_catchment(1e3, 10.0 - 1e-9, 10.0, rng);
    EXPECT_EQ(trace.groups.size(), 1u);
  }
}

TEST(Catchment, DeterministicUnderSeed) {
  Rng a(77), b(77);
  const auto x = simulate_catchment(3, 1, 500, a);
  const auto y = simulate_catchment(3, 1, 500, b);
  EXPECT_EQ(x.arrivals_s, y.arrivals_s);
  EXPECT_EQ(x.groups.size(), y.groups.size());
}

TEST(Catchment, RejectsBadParameters) {
  Rng rng(1);
  EXPECT_THROW(simulate_catchment(0, 1, 10, rng), Error);
  EXPECT_THROW(simulate_catchment(1, 0, 10, rng), Error);
  EXPECT_THROW(simulate_catchment(1, 10, 10, rng), Error);
}

TEST(Validation, SolvedRenewalFormPassesPrintedFormFails) {
  const auto runs = replicate(1, 1, 900, 1000, 3);
  const auto solved = validate_analytic(runs, expected_group_count(900, 1, 1), expected_group_size(1, 1), 0.05);
  EXPECT_TRUE(solved.pass) << solved.observed_groups << " " << solved.observed_group_size;
  EXPECT_LT(solved.groups_rel_error(), 0.02);
  EXPECT_LT(solved.size_rel_error(), 0.02);

  // (T + T/mu) / (tau + T/mu) at mu = 1, tau = 1, T = 900.
  const double printed = (900.0 + 900.0) / (1.0 + 900.0);
  EXPECT_NEAR(printed, 1.998, 1e-3);
  EXPECT_FALSE(validate_analytic(runs, printed, 2.0, 0.05).pass);
}

TEST(Validation, ExactExpectationPassesAtZeroTolerance) {
  const auto runs = replicate(2, 1, 100, 100, 9);
  std::uint64_t arrivals = 0, groups = 0;
  for (const auto& r : runs) {
    arrivals += r.arrivals;
    groups += r.groups;
  }
  const double mean_groups = static_cast<double>(groups) / 100.0;
  const double mean_size = static_cast<double>(arrivals) / static_cast<double>(groups);
  const auto v = validate_analytic(runs, mean_groups, mean_size, 0.0);
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.replications, 100u);
}

TEST(Validation, LargeRateApproachesHorizonOverTau) {
  const auto runs = replicate(100, 1, 900, 500, 5);
  const auto v = validate_analytic(runs, 900.0, expected_group_size(100, 1), 0.05);
  EXPECT_TRUE(v.pass) << v.observed_groups;
}

TEST(Validation, Errors) {
  auto runs = replicate(1, 1, 50, 99, 1);
  EXPECT_THROW(validate_analytic(runs, 25, 2, 0.05), Error);
  Rng rng(1);
  runs.push_back(simulate_catchment_summary(2, 1, 50, rng));
  EXPECT_THROW(validate_analytic(runs, 25, 2, 0.05), Error);
}

TEST(Validation, TableRows) {
  const auto runs = replicate(1, 1, 10, 2, 1);
  std::ostringstream out;
  write_catchment_table(out, runs);
  const auto text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "replication,arrivals,groups,mean_size");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}
