// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/traffic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "bine/builders.hpp"
#include "bine/errors.hpp"

namespace bine {

namespace {

void check_cover(const CommSchedule& schedule, const GroupMap& groups) {
  if (groups.size() != schedule.p) {
    throw DomainError("group map covers " + std::to_string(groups.size()) +
                      " ranks, schedule has " + std::to_string(schedule.p));
  }
}

std::string format_reduction(double value) {
  std::ostringstream s;
  s << std::setprecision(6) << value;
  return s.str();
}

}  // namespace

std::string TrafficReport::to_json() const {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : per_step) steps.push_back({{"total", s.total_bytes}, {"global", s.global_bytes}});
  nlohmann::json histogram = nlohmann::json::object();
  for (const auto& [d, count] : distance_histogram) histogram[std::to_string(d)] = count;
  nlohmann::json j{{"collective", std::string(to_string(collective))},
                   {"algorithm", algorithm},
                   {"p", p},
                   {"n", n},
                   {"total_bytes", total_bytes},
                   {"global_bytes", global_bytes},
                   {"per_step", steps},
                   {"distance_histogram", histogram}};
  return j.dump();
}

TrafficReport account(const CommSchedule& schedule, const GroupMap& groups) {
  check_cover(schedule, groups);
  TrafficReport report;
  report.collective = schedule.collective;
  report.algorithm = schedule.algorithm;
  report.p = schedule.p;
  report.n = schedule.n;
  report.per_step.resize(schedule.steps.size());
  for (std::size_t t = 0; t < schedule.steps.size(); ++t) {
    for (const Transfer& x : schedule.steps[t]) {
      const std::uint64_t bytes = x.bytes();
      report.per_step[t].total_bytes += bytes;
      if (groups.group(x.src) != groups.group(x.dst)) report.per_step[t].global_bytes += bytes;
      ++report.distance_histogram[modulo_distance(x.src, x.dst, schedule.p)];
    }
    report.total_bytes += report.per_step[t].total_bytes;
    report.global_bytes += report.per_step[t].global_bytes;
  }
  return report;
}

DistanceProfile distance_profile(const CommSchedule& schedule) {
  DistanceProfile profile(schedule.steps.size());
  for (std::size_t t = 0; t < schedule.steps.size(); ++t) {
    for (const Transfer& x : schedule.steps[t]) ++profile[t][modulo_distance(x.src, x.dst, schedule.p)];
  }
  return profile;
}

ReductionStat compare(const CommSchedule& baseline, const CommSchedule& candidate,
                      const GroupMap& groups) {
  if (baseline.collective != candidate.collective || baseline.p != candidate.p ||
      baseline.n != candidate.n) {
    throw DomainError("schedules differ in collective, rank count or vector size");
  }
  ReductionStat stat;
  stat.baseline = baseline.algorithm;
  stat.candidate = candidate.algorithm;
  stat.baseline_global = account(baseline, groups).global_bytes;
  stat.candidate_global = account(candidate, groups).global_bytes;
  if (stat.baseline_global > 0) {
    stat.reduction = 1.0 - static_cast<double>(stat.candidate_global) /
                               static_cast<double>(stat.baseline_global);
  }
  return stat;
}

const std::vector<VariantPair>& reference_pairs() {
  static const std::vector<VariantPair> pairs{
      {Collective::Broadcast, "binomial_halving", "bine_small"},
      {Collective::Allreduce, "recursive_doubling", "bine_small"},
      {Collective::Allreduce, "rabenseifner_like", "bine_large"},
  };
  return pairs;
}

SweepSummary summarize(const std::vector<double>& reductions, std::size_t jobs) {
  SweepSummary summary;
  summary.jobs = jobs;
  summary.comparable = reductions.size();
  if (reductions.empty()) return summary;
  std::vector<double> sorted = reductions;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0;
  for (double r : sorted) sum += r;
  summary.mean = sum / static_cast<double>(sorted.size());
  summary.min = sorted.front();
  summary.max = sorted.back();
  for (int q : {0, 10, 25, 50, 75, 90, 100}) {
    const double pos = (static_cast<double>(sorted.size()) - 1) * q / 100.0;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    summary.percentiles[q] = sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
  }
  return summary;
}

SweepResult allocation_sweep(const std::vector<AllocationRecord>& records, const VariantPair& pair,
                             const SweepOptions& options) {
  if (records.empty()) throw DomainError("allocation sweep over an empty record set");
  SweepResult result;
  result.pair = pair;
  const bool pow2 = requires_power_of_two(pair.collective, pair.baseline) ||
                    requires_power_of_two(pair.collective, pair.candidate);

  // Resolve the rank count of every job and build each schedule pair once.
  struct Job {
    const AllocationRecord* record;
    std::uint64_t p;
  };
  std::vector<Job> jobs;
  std::map<std::uint64_t, std::pair<CommSchedule, CommSchedule>> schedules;
  for (const auto& record : records) {
    std::uint64_t p = record.size();
    if (pow2 && !is_power_of_two(p)) {
      if (!options.truncate_to_power_of_two) {
        result.warnings.push_back("job '" + record.job + "' has " + std::to_string(p) +
                                  " nodes, not a power of two; skipped");
        continue;
      }
      p = std::uint64_t{1} << (63 - __builtin_clzll(p));
    }
    if (p < 2) {
      result.warnings.push_back("job '" + record.job + "' has fewer than 2 nodes; skipped");
      continue;
    }
    jobs.push_back({&record, p});
    if (schedules.count(p) == 0) {
      const std::uint64_t n = std::max(options.n, p);
      schedules.emplace(p, std::make_pair(
                               build_schedule({pair.collective, pair.baseline, p, 0, n}),
                               build_schedule({pair.collective, pair.candidate, p, 0, n})));
    }
  }

  result.rows.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const Job& job = jobs[k];
      std::vector<std::uint64_t> labels(job.record->groups.begin(),
                                        job.record->groups.begin() + static_cast<std::ptrdiff_t>(job.p));
      const GroupMap map = GroupMap::from_labels(labels, GroupSource::File, job.record->job);
      const auto& [baseline, candidate] = schedules.at(job.p);
      result.rows[k] = {job.record->job, job.p, map.group_count(), compare(baseline, candidate, map)};
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(options.jobs, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<double> reductions;
  for (const auto& row : result.rows) {
    if (row.stat.reduction) reductions.push_back(*row.stat.reduction);
  }
  result.summary = summarize(reductions, result.rows.size());
  return result;
}

void write_transfer_csv(std::ostream& out, const CommSchedule& schedule, const GroupMap& groups) {
  check_cover(schedule, groups);
  out << "step,src,dst,bytes,global\n";
  for (std::size_t t = 0; t < schedule.steps.size(); ++t) {
    for (const Transfer& x : schedule.steps[t]) {
      out << t << ',' << x.src << ',' << x.dst << ',' << x.bytes() << ','
          << (groups.group(x.src) != groups.group(x.dst) ? 1 : 0) << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "job,p,groups,baseline_global,bine_global,reduction\n";
  for (const auto& row : result.rows) {
    out << row.job << ',' << row.p << ',' << row.groups << ',' << row.stat.baseline_global << ','
        << row.stat.candidate_global << ','
        << (row.stat.reduction ? format_reduction(*row.stat.reduction) : "") << '\n';
  }
}

}  // namespace bine
