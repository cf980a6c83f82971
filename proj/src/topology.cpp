// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/topology.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

#include "bine/errors.hpp"

namespace bine {

GroupMap::GroupMap(std::vector<std::uint32_t> group_of, GroupSource source, std::string origin)
    : group_of_(std::move(group_of)), source_(source), origin_(std::move(origin)) {
  if (group_of_.empty()) throw DomainError("group map over zero ranks");
  const std::uint32_t top = *std::max_element(group_of_.begin(), group_of_.end());
  std::vector<bool> seen(std::size_t{top} + 1, false);
  for (std::uint32_t g : group_of_) seen[g] = true;
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw DomainError("group ids must be dense from 0");
  }
  count_ = top + 1;
}

GroupMap GroupMap::from_labels(const std::vector<std::uint64_t>& labels, GroupSource source,
                               std::string origin) {
  std::unordered_map<std::uint64_t, std::uint32_t> dense;
  std::vector<std::uint32_t> group_of;
  group_of.reserve(labels.size());
  for (std::uint64_t label : labels) {
    auto [it, inserted] = dense.emplace(label, static_cast<std::uint32_t>(dense.size()));
    group_of.push_back(it->second);
  }
  return GroupMap(std::move(group_of), source, std::move(origin));
}

std::string GroupMap::describe() const {
  switch (source_) {
    case GroupSource::Block: return "block:" + origin_;
    case GroupSource::File: return "file:" + origin_;
    case GroupSource::Explicit: break;
  }
  return origin_.empty() ? "explicit" : origin_;
}

std::string GroupMap::to_json() const {
  nlohmann::json j{{"p", size()}, {"groups", group_count()}, {"source", describe()},
                   {"group_of", group_of_}};
  return j.dump();
}

GroupMap block_groups(std::uint64_t p, std::uint64_t group_size) {
  if (group_size == 0) throw DomainError("group size must be at least 1");
  std::vector<std::uint32_t> group_of(p);
  for (Rank r = 0; r < p; ++r) group_of[r] = static_cast<std::uint32_t>(r / group_size);
  return GroupMap(std::move(group_of), GroupSource::Block, std::to_string(group_size));
}

GroupMap shifted_block_groups(std::uint64_t p, std::uint64_t group_size, std::uint64_t offset) {
  if (group_size == 0) throw DomainError("group size must be at least 1");
  std::vector<std::uint64_t> labels(p);
  for (Rank r = 0; r < p; ++r) labels[r] = (r + offset) / group_size;
  return GroupMap::from_labels(labels, GroupSource::Explicit,
                               "block:" + std::to_string(group_size) + "+" + std::to_string(offset));
}

GroupMap AllocationRecord::group_map() const {
  return GroupMap::from_labels(groups, GroupSource::File, job);
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

AllocationSet parse_allocation(std::istream& in, const std::string& origin) {
  AllocationSet out;
  std::map<std::string, std::size_t> index;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto fields = split_fields(content);
    if (!header) {
      if (fields != std::vector<std::string>{"job", "node", "group"}) {
        throw ParseError(number, "expected header 'job,node,group'");
      }
      header = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError(number, "expected 3 fields, got " + std::to_string(fields.size()));
    const auto& [job, node, group] = std::tie(fields[0], fields[1], fields[2]);
    if (job.empty() || node.empty()) throw ParseError(number, "empty job or node");
    std::uint64_t label = 0;
    const auto [ptr, ec] = std::from_chars(group.data(), group.data() + group.size(), label);
    if (ec != std::errc() || ptr != group.data() + group.size()) {
      throw ParseError(number, "group '" + group + "' is not a non-negative integer");
    }
    if (!seen.emplace(job, node).second) {
      throw ParseError(number, "node '" + node + "' listed twice for job '" + job + "'");
    }
    auto [it, inserted] = index.emplace(job, out.records.size());
    if (inserted) out.records.push_back(AllocationRecord{job, {}, {}});
    out.records[it->second].nodes.push_back(node);
    out.records[it->second].groups.push_back(label);
  }
  if (!header) throw ParseError(number, "missing header in " + origin);
  std::vector<AllocationRecord> kept;
  for (auto& record : out.records) {
    if (record.size() < 2) {
      out.warnings.push_back("job '" + record.job + "' has fewer than 2 nodes; skipped");
      continue;
    }
    kept.push_back(std::move(record));
  }
  out.records = std::move(kept);
  return out;
}

AllocationSet load_allocation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open allocation file '" + path + "'");
  return parse_allocation(in, path);
}

void write_allocation(std::ostream& out, const std::vector<AllocationRecord>& records) {
  out << "job,node,group\n";
  for (const auto& record : records) {
    for (std::size_t k = 0; k < record.size(); ++k) {
      out << record.job << ',' << record.nodes[k] << ',' << record.groups[k] << '\n';
    }
  }
}

AllocationRecord record_from_groups(const std::string& job, const GroupMap& map) {
  AllocationRecord record{job, {}, {}};
  for (Rank r = 0; r < map.size(); ++r) {
    record.nodes.push_back("n" + std::to_string(r));
    record.groups.push_back(map.group(r));
  }
  return record;
}

std::vector<AllocationRecord> random_block_allocations(const std::vector<std::uint64_t>& sizes,
                                                       std::size_t per_size,
                                                       std::uint64_t min_group,
                                                       std::uint64_t max_group,
                                                       std::uint64_t seed) {
  if (min_group == 0 || min_group > max_group) throw DomainError("invalid group size range");
  std::mt19937_64 rng(seed);
  std::vector<AllocationRecord> out;
  for (std::uint64_t p : sizes) {
    for (std::size_t k = 0; k < per_size; ++k) {
      const std::uint64_t g = std::uniform_int_distribution<std::uint64_t>(min_group, max_group)(rng);
      const std::uint64_t offset = std::uniform_int_distribution<std::uint64_t>(0, g - 1)(rng);
      const std::string job = "p" + std::to_string(p) + "-" + std::to_string(k);
      out.push_back(record_from_groups(job, shifted_block_groups(p, g, offset)));
    }
  }
  return out;
}

TorusMap::TorusMap(std::uint64_t p, std::vector<std::uint32_t> dims) : p_(p), dims_(std::move(dims)) {
  std::uint64_t product = 1;
  for (std::uint32_t d : dims_) {
    if (d == 0) throw DomainError("torus dimension of size 0");
    product *= d;
  }
  if (dims_.empty() || product != p) {
    throw DomainError("torus dimensions multiply to " + std::to_string(product) + ", expected " +
                      std::to_string(p));
  }
}

std::vector<std::uint32_t> TorusMap::coords(Rank r) const {
  if (r >= p_) throw DomainError("rank out of range");
  std::vector<std::uint32_t> c(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    c[k] = r % dims_[k];
    r /= dims_[k];
  }
  return c;
}

Rank TorusMap::rank(const std::vector<std::uint32_t>& coords) const {
  if (coords.size() != dims_.size()) throw DomainError("coordinate has the wrong dimension");
  std::uint64_t r = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (coords[k] >= dims_[k]) throw DomainError("coordinate out of range");
    r = r * dims_[k] + coords[k];
  }
  return static_cast<Rank>(r);
}

std::uint64_t TorusMap::hops(Rank a, Rank b) const {
  const auto ca = coords(a);
  const auto cb = coords(b);
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    const std::uint32_t d = ca[k] > cb[k] ? ca[k] - cb[k] : cb[k] - ca[k];
    total += std::min<std::uint32_t>(d, dims_[k] - d);
  }
  return total;
}

std::vector<std::vector<std::uint32_t>> torus_coords(std::uint64_t p,
                                                     const std::vector<std::uint32_t>& dims) {
  const TorusMap map(p, dims);
  std::vector<std::vector<std::uint32_t>> out(p);
  for (Rank r = 0; r < p; ++r) out[r] = map.coords(r);
  return out;
}

}  // namespace bine
