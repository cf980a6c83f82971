// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <memory>
#include <random>
#include <sstream>
#include <thread>

#include "bine/builders.hpp"
#include "bine/errors.hpp"
#include "bine/schedule_io.hpp"
#include "bine/simulator.hpp"
#include "bine/traffic.hpp"
#include "bine/trees.hpp"

namespace bine {

std::string resolve_variant(Collective collective, std::string_view variant, std::uint64_t n,
                            std::uint64_t cutover) {
  if (variant != "auto") return std::string(variant);
  switch (collective) {
    case Collective::Broadcast:
    case Collective::Reduce:
    case Collective::Allreduce:
      return n < cutover ? "bine_small" : "bine_large";
    default:
      return "bine";
  }
}

GroupMap parse_group_spec(std::string_view spec, std::uint64_t p) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw UnsupportedConfiguration("group spec '" + std::string(spec) +
                                   "' must be block:<size> or file:<path>");
  }
  const std::string kind(spec.substr(0, colon));
  const std::string value(spec.substr(colon + 1));
  if (kind == "block") {
    std::uint64_t g = 0;
    try {
      std::size_t used = 0;
      g = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw UnsupportedConfiguration("invalid group size '" + value + "'");
    }
    if (g == 0) throw UnsupportedConfiguration("group size must be at least 1");
    return block_groups(p, g);
  }
  if (kind == "file") {
    const AllocationSet set = load_allocation(value);
    if (set.records.empty()) throw UnsupportedConfiguration("no usable job in '" + value + "'");
    const AllocationRecord& record = set.records.front();
    if (p != 0 && record.size() != p) {
      throw UnsupportedConfiguration("job '" + record.job + "' in '" + value + "' has " +
                                     std::to_string(record.size()) + " nodes, expected " +
                                     std::to_string(p));
    }
    return GroupMap::from_labels(record.groups, GroupSource::File, value);
  }
  throw UnsupportedConfiguration("unknown group spec kind '" + kind + "'");
}

namespace {

/// Writes to --output when given, else to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
    stream_ = file_.get();
  }

  std::ostream& stream() { return *stream_; }

  void close() {
    if (!file_) return;
    file_->close();
    if (!*file_) throw std::runtime_error("error writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string format_double(double value) {
  std::ostringstream s;
  s << std::setprecision(6) << value;
  return s.str();
}

std::vector<Collective> parse_collectives(const std::vector<std::string>& names) {
  if (names.empty()) return all_collectives();
  std::vector<Collective> out;
  for (const auto& name : names) out.push_back(parse_collective(name));
  return out;
}

void require_supported(Collective c, const std::string& variant, std::uint64_t p) {
  if (requires_power_of_two(c, variant) && !is_power_of_two(p)) {
    throw UnsupportedConfiguration(std::string(to_string(c)) + " variant '" + variant +
                                   "' needs a power-of-two rank count, got p = " +
                                   std::to_string(p));
  }
}

/// Runs fn(0..count-1) on `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) fn(k);
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

struct Common {
  std::uint64_t n = 1 << 20;
  std::uint64_t cutover = 1 << 20;
  std::string contiguity = "noncontig";
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Common& c, bool with_contiguity) {
  cmd->add_option("--n", c.n, "vector bytes (alltoall: per-rank send buffer)")->capture_default_str();
  cmd->add_option("--cutover", c.cutover, "bytes at which variant auto switches to bine_large")
      ->capture_default_str();
  if (with_contiguity) {
    cmd->add_option("--contiguity", c.contiguity, "reduce_scatter block layout")
        ->check(CLI::IsMember({"noncontig", "pre_permute", "unpermuted_output"}))
        ->capture_default_str();
  }
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", c.output, "output file (default: stdout)");
}

// ---------------------------------------------------------------------------
// verify

struct VerifyConfig {
  std::vector<std::string> collectives;
  std::vector<std::string> variants;
  std::vector<std::uint64_t> ps{2, 4, 8, 16, 32, 64};
  Rank root = 0;
  bool all_roots = false;
  std::vector<unsigned> segments{1};
  bool numeric = false;
  std::size_t mutations = 0;
  bool all_contiguity = false;
};

struct VerifyCase {
  ScheduleRequest request;
  unsigned segments = 1;
};

struct VerifyOutcome {
  bool passed = false;
  std::string detail;
  std::string report_json;
};

VerifyOutcome run_case(const VerifyCase& c, const VerifyConfig& cfg, std::uint64_t seed) {
  VerifyOutcome outcome;
  const CommSchedule schedule = build_schedule(c.request);
  const VerifyReport report = verify(schedule, {c.segments, std::nullopt});
  outcome.report_json = report.to_json();
  if (!report.passed) {
    outcome.detail = report.defect ? *report.defect
                                   : "rank " + std::to_string(report.divergence->rank) + " slot " +
                                         std::to_string(report.divergence->slot) + ": expected " +
                                         report.divergence->expected + ", got " +
                                         report.divergence->actual;
    return outcome;
  }
  if (cfg.numeric) {
    const NumericReport numeric = verify_numeric(schedule, 4, seed);
    if (!numeric.passed) {
      outcome.detail = "numeric: " + numeric.message;
      return outcome;
    }
  }
  if (cfg.mutations > 0) {
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < cfg.mutations; ++k) {
      const Mutation m = random_mutation(schedule, rng);
      if (verify(apply_mutation(schedule, m), {c.segments, std::nullopt}).passed) {
        outcome.detail = "undetected mutation at step " + std::to_string(m.step) + ", transfer " +
                         std::to_string(m.transfer);
        return outcome;
      }
    }
    outcome.detail = std::to_string(cfg.mutations) + " mutations detected";
  }
  outcome.passed = true;
  return outcome;
}

int cmd_verify(const VerifyConfig& cfg, const Common& common, std::ostream& out, std::ostream& err) {
  std::vector<VerifyCase> cases;
  for (Collective c : parse_collectives(cfg.collectives)) {
    std::vector<std::string> variants;
    if (cfg.variants.empty()) {
      for (auto v : variant_names(c)) variants.emplace_back(v);
    } else {
      for (const auto& v : cfg.variants) variants.push_back(resolve_variant(c, v, common.n, common.cutover));
    }
    for (const auto& variant : variants) {
      std::vector<Contiguity> layouts{parse_contiguity(common.contiguity)};
      if (c == Collective::ReduceScatter && variant == "bine" && cfg.all_contiguity) {
        layouts = {Contiguity::Noncontig, Contiguity::PrePermute, Contiguity::UnpermutedOutput};
      }
      for (std::uint64_t p : cfg.ps) {
        require_supported(c, variant, p);
        std::vector<Rank> roots{cfg.root};
        if (is_rooted(c) && cfg.all_roots) {
          roots = {0, static_cast<Rank>(p / 2), static_cast<Rank>(p - 1)};
          std::sort(roots.begin(), roots.end());
          roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        } else if (!is_rooted(c)) {
          roots = {0};
        }
        for (Rank root : roots) {
          for (Contiguity layout : layouts) {
            if (c != Collective::ReduceScatter) layout = Contiguity::Noncontig;
            for (unsigned seg : cfg.segments) {
              ScheduleRequest request{c, variant, p, root, std::max(common.n, p), layout};
              cases.push_back({request, seg});
            }
          }
        }
      }
    }
  }
  // Reject unbuildable configurations before running anything.
  for (const auto& c : cases) {
    if (c.segments == 0) throw UnsupportedConfiguration("segments must be positive");
    if (c.request.root >= c.request.p) throw UnsupportedConfiguration("root out of range");
  }

  std::vector<VerifyOutcome> outcomes(cases.size());
  std::vector<std::string> errors(cases.size());
  parallel_for(cases.size(), common.jobs, [&](std::size_t k) {
    try {
      outcomes[k] = run_case(cases[k], cfg, common.seed + k);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });
  for (std::size_t k = 0; k < cases.size(); ++k) {
    if (!errors[k].empty()) throw UnsupportedConfiguration(errors[k]);
  }

  Sink sink(common.output, out);
  std::ostream& os = sink.stream();
  std::size_t failures = 0;
  nlohmann::json reports = nlohmann::json::array();
  if (common.format == "csv") os << "collective,variant,p,root,segments,contiguity,status,detail\n";
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& r = cases[k].request;
    const auto& o = outcomes[k];
    failures += o.passed ? 0 : 1;
    if (common.format == "csv") {
      os << to_string(r.collective) << ',' << r.variant << ',' << r.p << ',' << r.root << ','
         << cases[k].segments << ',' << to_string(r.contiguity) << ',' << (o.passed ? "pass" : "fail")
         << ',' << '"' << o.detail << '"' << '\n';
    } else {
      nlohmann::json j = nlohmann::json::parse(o.report_json);
      j["variant"] = r.variant;
      j["contiguity"] = std::string(to_string(r.contiguity));
      j["pass"] = o.passed;
      if (!o.detail.empty()) j["detail"] = o.detail;
      reports.push_back(std::move(j));
    }
  }
  if (common.format == "json") os << reports.dump(2) << '\n';
  sink.close();
  err << cases.size() - failures << "/" << cases.size() << " configurations passed\n";
  return failures == 0 ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// schedule

struct ScheduleConfig {
  std::string collective;
  std::string variant;
  std::uint64_t p = 8;
  Rank root = 0;
};

int cmd_schedule(const ScheduleConfig& cfg, const Common& common, std::ostream& out) {
  const Collective c = parse_collective(cfg.collective);
  const std::string variant = resolve_variant(c, cfg.variant, common.n, common.cutover);
  require_supported(c, variant, cfg.p);
  const CommSchedule schedule =
      build_schedule({c, variant, cfg.p, cfg.root, common.n, parse_contiguity(common.contiguity)});
  Sink sink(common.output, out);
  if (common.format == "json") {
    sink.stream() << schedule_to_json(schedule, 2) << '\n';
  } else {
    write_schedule_csv(sink.stream(), schedule);
  }
  sink.close();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// traffic

struct TrafficConfig {
  std::string collective;
  std::string baseline;
  std::string candidate;
  std::vector<std::uint64_t> ps{8};
  std::vector<std::string> groups{"block:2"};
  Rank root = 0;
  bool transfers = false;
};

/// Baseline/candidate pairs used when none are given on the command line.
std::vector<std::pair<std::string, std::string>> default_pairs(Collective c) {
  switch (c) {
    case Collective::Broadcast: return {{"binomial_halving", "bine_small"}};
    case Collective::Reduce: return {{"binomial", "bine_small"}};
    case Collective::Gather:
    case Collective::Scatter: return {{"binomial", "bine"}};
    case Collective::Allgather: return {{"recursive_doubling", "bine"}};
    case Collective::ReduceScatter: return {{"recursive_halving", "bine"}};
    case Collective::Allreduce:
      return {{"recursive_doubling", "bine_small"}, {"rabenseifner_like", "bine_large"}};
    case Collective::Alltoall: return {{"bruck", "bine"}};
  }
  return {};
}

int cmd_traffic(const TrafficConfig& cfg, const Common& common, std::ostream& out) {
  const Collective c = parse_collective(cfg.collective);
  std::vector<std::pair<std::string, std::string>> pairs;
  if (cfg.baseline.empty() && cfg.candidate.empty()) {
    pairs = default_pairs(c);
  } else {
    if (cfg.baseline.empty() || cfg.candidate.empty()) {
      throw UnsupportedConfiguration("--baseline and --candidate must be given together");
    }
    pairs = {{resolve_variant(c, cfg.baseline, common.n, common.cutover),
              resolve_variant(c, cfg.candidate, common.n, common.cutover)}};
  }
  const Contiguity layout = parse_contiguity(common.contiguity);
  auto build = [&](const std::string& variant, std::uint64_t p) {
    require_supported(c, variant, p);
    return build_schedule({c, variant, p, cfg.root, std::max(common.n, p), layout});
  };

  Sink sink(common.output, out);
  std::ostream& os = sink.stream();
  if (cfg.transfers) {
    // Per-transfer rows of the candidate for the first configuration.
    const std::uint64_t p = cfg.ps.front();
    const GroupMap map = parse_group_spec(cfg.groups.front(), cfg.groups.front().rfind("file:", 0) == 0 ? 0 : p);
    write_transfer_csv(os, build(pairs.front().second, map.size()), map);
    sink.close();
    return kExitOk;
  }
  nlohmann::json rows = nlohmann::json::array();
  if (common.format == "csv") {
    os << "collective,p,groups,baseline,candidate,baseline_global,candidate_global,reduction,comparable\n";
  }
  for (const auto& spec : cfg.groups) {
    const bool from_file = spec.rfind("file:", 0) == 0;
    std::vector<std::uint64_t> ps = cfg.ps;
    if (from_file) ps = {parse_group_spec(spec, 0).size()};
    for (std::uint64_t p : ps) {
      const GroupMap map = parse_group_spec(spec, p);
      for (const auto& [base, cand] : pairs) {
        const ReductionStat stat = compare(build(base, p), build(cand, p), map);
        const std::string reduction = stat.reduction ? format_double(*stat.reduction) : "";
        if (common.format == "csv") {
          os << to_string(c) << ',' << p << ',' << spec << ',' << base << ',' << cand << ','
             << stat.baseline_global << ',' << stat.candidate_global << ',' << reduction << ','
             << (stat.comparable() ? 1 : 0) << '\n';
        } else {
          nlohmann::json j{{"collective", std::string(to_string(c))},
                           {"p", p},
                           {"groups", spec},
                           {"group_count", map.group_count()},
                           {"baseline", base},
                           {"candidate", cand},
                           {"baseline_global", stat.baseline_global},
                           {"candidate_global", stat.candidate_global},
                           {"comparable", stat.comparable()}};
          j["reduction"] = stat.reduction ? nlohmann::json(*stat.reduction) : nlohmann::json(nullptr);
          rows.push_back(std::move(j));
        }
      }
    }
  }
  if (common.format == "json") os << rows.dump(2) << '\n';
  sink.close();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// alloc

struct AllocConfig {
  std::string file;
  std::string variant = "both";
  bool truncate = false;
  bool summary = false;
};

int cmd_alloc(const AllocConfig& cfg, const Common& common, std::ostream& out, std::ostream& err) {
  const AllocationSet set = load_allocation(cfg.file);
  for (const auto& w : set.warnings) err << "warning: " << w << '\n';
  if (set.records.empty()) throw UnsupportedConfiguration("no usable job in '" + cfg.file + "'");
  std::vector<std::pair<std::string, VariantPair>> pairs;
  if (cfg.variant != "large") pairs.push_back({"small", reference_pairs()[1]});
  if (cfg.variant != "small") pairs.push_back({"large", reference_pairs()[2]});

  SweepOptions options;
  options.n = common.n;
  options.truncate_to_power_of_two = cfg.truncate;
  options.jobs = common.jobs;

  Sink sink(common.output, out);
  std::ostream& os = sink.stream();
  nlohmann::json doc = nlohmann::json::array();
  if (common.format == "csv") {
    os << (cfg.summary ? "variant,p,jobs,comparable,mean,min,p25,median,p75,max\n"
                       : "job,p,groups,baseline_global,bine_global,reduction,variant\n");
  }
  for (const auto& [label, pair] : pairs) {
    const SweepResult result = allocation_sweep(set.records, pair, options);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    // Group rows by node count, keeping file order within a size.
    std::vector<std::size_t> order(result.rows.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return result.rows[a].p < result.rows[b].p; });
    std::map<std::uint64_t, std::vector<const JobReduction*>> by_size;
    for (std::size_t k : order) by_size[result.rows[k].p].push_back(&result.rows[k]);

    if (cfg.summary) {
      for (const auto& [p, rows] : by_size) {
        std::vector<double> values;
        for (const auto* row : rows) {
          if (row->stat.reduction) values.push_back(*row->stat.reduction);
        }
        const SweepSummary s = summarize(values, rows.size());
        auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
        auto pct = [&](int q) {
          return s.percentiles.count(q) ? format_double(s.percentiles.at(q)) : std::string();
        };
        if (common.format == "csv") {
          os << label << ',' << p << ',' << s.jobs << ',' << s.comparable << ',' << cell(s.mean) << ','
             << cell(s.min) << ',' << pct(25) << ',' << pct(50) << ',' << pct(75) << ',' << cell(s.max)
             << '\n';
        } else {
          nlohmann::json j{{"variant", label}, {"p", p}, {"jobs", s.jobs}, {"comparable", s.comparable}};
          j["mean"] = s.mean ? nlohmann::json(*s.mean) : nlohmann::json(nullptr);
          j["min"] = s.min ? nlohmann::json(*s.min) : nlohmann::json(nullptr);
          j["max"] = s.max ? nlohmann::json(*s.max) : nlohmann::json(nullptr);
          for (const auto& [q, v] : s.percentiles) j["p" + std::to_string(q)] = v;
          doc.push_back(std::move(j));
        }
      }
      continue;
    }
    for (std::size_t k : order) {
      const JobReduction& row = result.rows[k];
      if (common.format == "csv") {
        os << row.job << ',' << row.p << ',' << row.groups << ',' << row.stat.baseline_global << ','
           << row.stat.candidate_global << ','
           << (row.stat.reduction ? format_double(*row.stat.reduction) : "") << ',' << label << '\n';
      } else {
        nlohmann::json j{{"job", row.job},
                         {"p", row.p},
                         {"groups", row.groups},
                         {"baseline_global", row.stat.baseline_global},
                         {"bine_global", row.stat.candidate_global},
                         {"variant", label}};
        j["reduction"] = row.stat.reduction ? nlohmann::json(*row.stat.reduction) : nlohmann::json(nullptr);
        doc.push_back(std::move(j));
      }
    }
  }
  if (common.format == "json") os << doc.dump(2) << '\n';
  sink.close();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// synth, tree, groups

struct SynthConfig {
  std::vector<std::uint64_t> ps{64, 128, 256, 512, 1024};
  std::size_t count = 10;
  std::uint64_t group_min = 4;
  std::uint64_t group_max = 128;
};

int cmd_synth(const SynthConfig& cfg, const Common& common, std::ostream& out) {
  const auto records =
      random_block_allocations(cfg.ps, cfg.count, cfg.group_min, cfg.group_max, common.seed);
  Sink sink(common.output, out);
  write_allocation(sink.stream(), records);
  sink.close();
  return kExitOk;
}

struct TreeConfig {
  std::string kind = "bine_halving";
  std::uint64_t p = 8;
  Rank root = 0;
};

int cmd_tree(const TreeConfig& cfg, const Common& common, std::ostream& out) {
  const CommTree tree = build_tree(parse_tree_kind(cfg.kind), cfg.p, cfg.root);
  Sink sink(common.output, out);
  if (common.format == "json") {
    sink.stream() << tree_to_json(tree, 2) << '\n';
  } else {
    sink.stream() << "child,parent,step\n";
    for (const TreeEdge& e : tree.edges()) sink.stream() << e.child << ',' << e.parent << ',' << e.step << '\n';
  }
  sink.close();
  return kExitOk;
}

struct GroupsConfig {
  std::string spec = "block:2";
  std::uint64_t p = 8;
};

int cmd_groups(const GroupsConfig& cfg, const Common& common, std::ostream& out) {
  Sink sink(common.output, out);
  if (cfg.spec.rfind("file:", 0) == 0) {
    const AllocationSet set = load_allocation(cfg.spec.substr(5));
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& record : set.records) {
      nlohmann::json j = nlohmann::json::parse(record.group_map().to_json());
      j["job"] = record.job;
      doc.push_back(std::move(j));
    }
    sink.stream() << doc.dump(2) << '\n';
  } else {
    sink.stream() << nlohmann::json::parse(parse_group_spec(cfg.spec, cfg.p).to_json()).dump(2) << '\n';
  }
  sink.close();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bine tree collective schedules: build, verify and account traffic", "bine"};
  app.require_subcommand(1);

  Common common;

  VerifyConfig verify_cfg;
  auto* verify_cmd = app.add_subcommand("verify", "build and verify schedules against the oracle");
  verify_cmd->add_option("--collective", verify_cfg.collectives, "collectives (default: all)")->delimiter(',');
  verify_cmd->add_option("--variant", verify_cfg.variants, "variants (default: all)")->delimiter(',');
  verify_cmd->add_option("--p", verify_cfg.ps, "rank counts")->delimiter(',')->capture_default_str();
  verify_cmd->add_option("--root", verify_cfg.root, "root rank")->capture_default_str();
  verify_cmd->add_flag("--all-roots", verify_cfg.all_roots, "use roots 0, p/2 and p-1");
  verify_cmd->add_option("--segments", verify_cfg.segments, "tagged slots per block")
      ->delimiter(',')
      ->capture_default_str();
  verify_cmd->add_flag("--numeric", verify_cfg.numeric, "also run the int32 execution");
  verify_cmd->add_flag("--all-contiguity", verify_cfg.all_contiguity,
                       "verify every reduce_scatter layout");
  verify_cmd->add_option("--mutations", verify_cfg.mutations, "random mutations that must be caught")
      ->capture_default_str();
  verify_cmd->add_option("--seed", common.seed, "seed for mutations and numeric inputs")->capture_default_str();
  verify_cmd->add_option("--jobs", common.jobs, "worker threads")->capture_default_str();
  add_common(verify_cmd, common, true);

  ScheduleConfig schedule_cfg;
  auto* schedule_cmd = app.add_subcommand("schedule", "dump one schedule");
  schedule_cmd->add_option("--collective", schedule_cfg.collective, "collective")->required();
  schedule_cmd->add_option("--variant", schedule_cfg.variant, "variant or auto")->required();
  schedule_cmd->add_option("--p", schedule_cfg.p, "rank count")->capture_default_str();
  schedule_cmd->add_option("--root", schedule_cfg.root, "root rank")->capture_default_str();
  add_common(schedule_cmd, common, true);

  TrafficConfig traffic_cfg;
  auto* traffic_cmd = app.add_subcommand("traffic", "compare global traffic of two variants");
  traffic_cmd->add_option("--collective", traffic_cfg.collective, "collective")->required();
  traffic_cmd->add_option("--baseline", traffic_cfg.baseline, "baseline variant");
  traffic_cmd->add_option("--candidate", traffic_cfg.candidate, "candidate variant");
  traffic_cmd->add_option("--p", traffic_cfg.ps, "rank counts")->delimiter(',')->capture_default_str();
  traffic_cmd->add_option("--groups", traffic_cfg.groups, "block:<size> or file:<path>")
      ->delimiter(',')
      ->capture_default_str();
  traffic_cmd->add_option("--root", traffic_cfg.root, "root rank")->capture_default_str();
  traffic_cmd->add_flag("--transfers", traffic_cfg.transfers,
                        "per-transfer rows (step,src,dst,bytes,global) of the candidate");
  add_common(traffic_cmd, common, true);

  AllocConfig alloc_cfg;
  auto* alloc_cmd = app.add_subcommand("alloc", "per-job allreduce traffic reduction");
  alloc_cmd->add_option("--file", alloc_cfg.file, "allocation CSV (job,node,group)")->required();
  alloc_cmd->add_option("--variant", alloc_cfg.variant, "small, large or both")
      ->check(CLI::IsMember({"small", "large", "both"}))
      ->capture_default_str();
  alloc_cmd->add_flag("--truncate", alloc_cfg.truncate, "truncate job sizes to a power of two");
  alloc_cmd->add_flag("--summary", alloc_cfg.summary, "one summary row per node count");
  alloc_cmd->add_option("--jobs", common.jobs, "worker threads")->capture_default_str();
  add_common(alloc_cmd, common, false);

  SynthConfig synth_cfg;
  auto* synth_cmd = app.add_subcommand("synth", "write synthetic contiguous allocations");
  synth_cmd->add_option("--p", synth_cfg.ps, "job sizes")->delimiter(',')->capture_default_str();
  synth_cmd->add_option("--count", synth_cfg.count, "jobs per size")->capture_default_str();
  synth_cmd->add_option("--group-min", synth_cfg.group_min, "smallest group size")->capture_default_str();
  synth_cmd->add_option("--group-max", synth_cfg.group_max, "largest group size")->capture_default_str();
  synth_cmd->add_option("--seed", common.seed, "random seed")->capture_default_str();
  synth_cmd->add_option("--output", common.output, "output file (default: stdout)");

  TreeConfig tree_cfg;
  auto* tree_cmd = app.add_subcommand("tree", "print a communication tree");
  tree_cmd->add_option("--kind", tree_cfg.kind, "tree kind")
      ->check(CLI::IsMember({"bine_halving", "bine_doubling", "binomial_halving", "binomial_doubling"}))
      ->capture_default_str();
  tree_cmd->add_option("--p", tree_cfg.p, "rank count")->capture_default_str();
  tree_cmd->add_option("--root", tree_cfg.root, "root rank")->capture_default_str();
  add_common(tree_cmd, common, false);

  GroupsConfig groups_cfg;
  auto* groups_cmd = app.add_subcommand("groups", "echo a group map as JSON");
  groups_cmd->add_option("--groups", groups_cfg.spec, "block:<size> or file:<path>")->capture_default_str();
  groups_cmd->add_option("--p", groups_cfg.p, "rank count for block maps")->capture_default_str();
  groups_cmd->add_option("--output", common.output, "output file (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify_cmd->parsed()) return cmd_verify(verify_cfg, common, out, err);
    if (schedule_cmd->parsed()) return cmd_schedule(schedule_cfg, common, out);
    if (traffic_cmd->parsed()) return cmd_traffic(traffic_cfg, common, out);
    if (alloc_cmd->parsed()) return cmd_alloc(alloc_cfg, common, out, err);
    if (synth_cmd->parsed()) return cmd_synth(synth_cfg, common, out);
    if (tree_cmd->parsed()) return cmd_tree(tree_cfg, common, out);
    if (groups_cmd->parsed()) return cmd_groups(groups_cfg, common, out);
  } catch (const UnsupportedConfiguration& e) {
    err << "unsupported configuration: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run_cli(args, out, err);
}

}  // namespace bine
