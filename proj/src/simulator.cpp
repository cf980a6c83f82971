// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/simulator.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <unordered_map>

#include "bine/errors.hpp"
#include "simulator_support.hpp"

namespace bine {

using detail::BufferShape;

namespace {

constexpr std::uint32_t kNone = 0xFFFFFFFFU;

/// Interned contributor sets. Ids 0..p-1 are the singletons; equal sets
/// always share an id.
class ContributionPool {
 public:
  explicit ContributionPool(std::uint64_t p) : p_(p), words_((p + 63) / 64) {
    std::vector<std::uint64_t> bits(words_, 0);
    for (Rank r = 0; r < p; ++r) {
      bits[r / 64] = std::uint64_t{1} << (r % 64);
      intern(bits);
      bits[r / 64] = 0;
    }
    for (Rank r = 0; r < p; ++r) bits[r / 64] |= std::uint64_t{1} << (r % 64);
    full_ = intern(bits);
  }

  std::uint32_t full() const noexcept { return full_; }

  std::uint32_t intern(const std::vector<std::uint64_t>& bits) {
    const std::uint64_t h = hash(bits.data());
    auto& bucket = index_[h];
    for (std::uint32_t id : bucket) {
      if (std::equal(bits.begin(), bits.end(), data_.begin() + offset(id))) return id;
    }
    const auto id = static_cast<std::uint32_t>(data_.size() / words_);
    data_.insert(data_.end(), bits.begin(), bits.end());
    bucket.push_back(id);
    return id;
  }

  std::uint32_t intern(const std::vector<Rank>& members) {
    std::vector<std::uint64_t> bits(words_, 0);
    for (Rank r : members) {
      if (r >= p_) throw DomainError("contributor " + std::to_string(r) + " out of range");
      bits[r / 64] |= std::uint64_t{1} << (r % 64);
    }
    return intern(bits);
  }

  /// Union of two disjoint sets; kNone if they overlap.
  std::uint32_t merge(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t key = (std::uint64_t{std::min(a, b)} << 32) | std::max(a, b);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<std::uint64_t> bits(words_);
    std::uint32_t result = kNone;
    bool overlap = false;
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t x = data_[offset(a) + w];
      const std::uint64_t y = data_[offset(b) + w];
      overlap = overlap || (x & y) != 0;
      bits[w] = x | y;
    }
    if (!overlap) result = intern(bits);
    memo_.emplace(key, result);
    return result;
  }

  std::vector<Rank> members(std::uint32_t id) const {
    std::vector<Rank> out;
    for (Rank r = 0; r < p_; ++r) {
      if ((data_[offset(id) + r / 64] >> (r % 64)) & 1U) out.push_back(r);
    }
    return out;
  }

 private:
  std::size_t offset(std::uint32_t id) const { return std::size_t{id} * words_; }

  std::uint64_t hash(const std::uint64_t* bits) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (std::size_t w = 0; w < words_; ++w) {
      h ^= bits[w] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

  std::uint64_t p_;
  std::size_t words_;
  std::uint32_t full_ = 0;
  std::vector<std::uint64_t> data_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> index_;
  std::unordered_map<std::uint64_t, std::uint32_t> memo_;
};

struct Cell {
  std::uint32_t block = kNone;
  std::uint32_t set = kNone;

  bool empty() const noexcept { return block == kNone; }
};

class Machine {
 public:
  Machine(const CommSchedule& schedule, const SimulationOptions& options)
      : schedule_(schedule),
        shape_{schedule.collective, schedule.p,    schedule.root, schedule.num_blocks,
               options.segments,    &schedule.result_blocks},
        single_port_(options.single_port.value_or(schedule.single_ported)),
        pool_(schedule.p),
        cells_(schedule.p * shape_.slots()) {
    if (options.segments == 0) throw DomainError("segments must be positive");
    if (schedule.num_blocks == 0) throw DomainError("schedule without blocks");
  }

  const BufferShape& shape() const { return shape_; }
  ContributionPool& pool() { return pool_; }

  Cell& cell(Rank r, std::uint64_t slot) { return cells_[r * shape_.slots() + slot]; }

  void load_inputs() {
    for (Rank r = 0; r < shape_.p; ++r) {
      for (std::uint64_t k = 0; k < shape_.slots(); ++k) {
        if (shape_.has_input(r, k)) cell(r, k) = {shape_.input_block(r, k), r};
      }
    }
  }

  void load(const std::vector<RankState>& states) {
    if (states.size() != shape_.p) throw DomainError("initial state must cover every rank");
    for (const RankState& s : states) {
      if (s.rank >= shape_.p || s.slots.size() != shape_.slots()) {
        throw DomainError("initial state does not match the schedule's buffer shape");
      }
      for (std::uint64_t k = 0; k < shape_.slots(); ++k) {
        const auto& tag = s.slots[k];
        cell(s.rank, k) = tag ? Cell{tag->block, pool_.intern(tag->contributors)} : Cell{};
      }
    }
  }

  std::vector<RankState> dump() {
    std::vector<RankState> out(shape_.p);
    for (Rank r = 0; r < shape_.p; ++r) {
      out[r].rank = r;
      out[r].slots.resize(shape_.slots());
      for (std::uint64_t k = 0; k < shape_.slots(); ++k) {
        const Cell c = cell(r, k);
        if (!c.empty()) out[r].slots[k] = ValueTag{c.block, pool_.members(c.set)};
      }
    }
    return out;
  }

  void run() {
    permute(schedule_.initial_permutation, "initial");
    std::vector<std::uint32_t> stamp(cells_.size(), 0);
    std::vector<std::size_t> sent(shape_.p, 0);
    std::vector<std::size_t> received(shape_.p, 0);
    struct Payload {
      std::uint64_t index;
      Cell value;
      bool reduce;
      std::size_t transfer;
    };
    std::vector<Payload> payload;
    const unsigned c = shape_.segments;
    for (std::size_t t = 0; t < schedule_.steps.size(); ++t) {
      const auto& step = schedule_.steps[t];
      payload.clear();
      for (std::size_t j = 0; j < step.size(); ++j) {
        const Transfer& x = step[j];
        check_transfer(t, j, x, sent, received);
        for (std::size_t k = 0; k < x.blocks.size(); ++k) {
          for (unsigned g = 0; g < c; ++g) {
            const Cell v = cell(x.src, std::uint64_t{x.blocks[k]} * c + g);
            if (v.empty()) {
              throw ScheduleDefect(t, j, "rank " + std::to_string(x.src) + " sends empty block " +
                                             std::to_string(x.blocks[k]));
            }
            const std::uint64_t index = x.dst * shape_.slots() + std::uint64_t{x.dst_block(k)} * c + g;
            payload.push_back({index, v, x.reduce, j});
          }
        }
      }
      const auto mark = static_cast<std::uint32_t>(2 * (t + 1));
      for (const Payload& m : payload) {
        Cell& target = cells_[m.index];
        const bool touched = (stamp[m.index] & ~1U) == mark;
        if (touched && (!m.reduce || (stamp[m.index] & 1U) == 0)) {
          throw ScheduleDefect(t, m.transfer, "conflicting writes to one slot");
        }
        stamp[m.index] = mark | (m.reduce ? 1U : 0U);
        if (!m.reduce) {
          target = m.value;
          continue;
        }
        if (target.empty()) throw ScheduleDefect(t, m.transfer, "reduction into an empty slot");
        if (target.block != m.value.block) {
          throw ScheduleDefect(t, m.transfer,
                               "reduction of block " + std::to_string(m.value.block) +
                                   " into block " + std::to_string(target.block));
        }
        const std::uint32_t merged = pool_.merge(target.set, m.value.set);
        if (merged == kNone) throw ScheduleDefect(t, m.transfer, "contribution counted twice");
        target.set = merged;
      }
    }
    permute(schedule_.final_permutation, "final");
  }

  /// First slot whose content differs from the oracle, if any.
  std::optional<Divergence> compare() {
    for (Rank r = 0; r < shape_.p; ++r) {
      for (std::uint64_t k = 0; k < shape_.slots(); ++k) {
        const detail::Expectation e = detail::expected_slot(shape_, r, k);
        if (!e.specified) continue;
        const Cell got = cell(r, k);
        const std::uint32_t want = e.origin ? *e.origin : pool_.full();
        if (got.block == e.block && got.set == want) continue;
        Divergence d;
        d.rank = r;
        d.slot = static_cast<std::uint32_t>(k);
        d.expected = to_string(ValueTag{e.block, pool_.members(want)});
        d.actual = got.empty() ? "empty" : to_string(ValueTag{got.block, pool_.members(got.set)});
        return d;
      }
    }
    return std::nullopt;
  }

 private:
  void check_transfer(std::size_t t, std::size_t j, const Transfer& x, std::vector<std::size_t>& sent,
                      std::vector<std::size_t>& received) const {
    if (x.src >= shape_.p || x.dst >= shape_.p) throw ScheduleDefect(t, j, "rank out of range");
    if (x.src == x.dst) throw ScheduleDefect(t, j, "transfer to self");
    if (x.blocks.empty()) throw ScheduleDefect(t, j, "empty transfer");
    if (!x.dst_blocks.empty() && x.dst_blocks.size() != x.blocks.size()) {
      throw ScheduleDefect(t, j, "destination block list has the wrong length");
    }
    for (std::size_t k = 0; k < x.blocks.size(); ++k) {
      if (x.blocks[k] >= shape_.num_blocks || x.dst_block(k) >= shape_.num_blocks) {
        throw ScheduleDefect(t, j, "block index out of range");
      }
    }
    if (!single_port_) return;
    const std::size_t mark = t + 1;
    if (sent[x.src] == mark) {
      throw ScheduleDefect(t, j, "rank " + std::to_string(x.src) + " sends twice in one step");
    }
    if (received[x.dst] == mark) {
      throw ScheduleDefect(t, j, "rank " + std::to_string(x.dst) + " receives twice in one step");
    }
    sent[x.src] = mark;
    received[x.dst] = mark;
  }

  void permute(const std::vector<Permutation>& perms, const char* which) {
    if (perms.empty()) return;
    if (perms.size() != 1 && perms.size() != shape_.p) {
      throw ScheduleDefect(0, 0, std::string(which) + " permutation count mismatch");
    }
    const unsigned c = shape_.segments;
    std::vector<Cell> moved(shape_.slots());
    for (Rank r = 0; r < shape_.p; ++r) {
      const Permutation& perm = *permutation_for(perms, r);
      if (!detail::is_permutation_of(perm, shape_.num_blocks)) {
        throw ScheduleDefect(0, 0, std::string(which) + " permutation is not a bijection");
      }
      for (std::uint32_t k = 0; k < shape_.num_blocks; ++k) {
        for (unsigned g = 0; g < c; ++g) {
          moved[std::uint64_t{perm[k]} * c + g] = cell(r, std::uint64_t{k} * c + g);
        }
      }
      std::copy(moved.begin(), moved.end(), cells_.begin() + r * shape_.slots());
    }
  }

  const CommSchedule& schedule_;
  BufferShape shape_;
  bool single_port_;
  ContributionPool pool_;
  std::vector<Cell> cells_;
};

std::string format_members(const std::vector<Rank>& members) {
  std::string out = "{";
  for (std::size_t i = 0; i < members.size();) {
    std::size_t j = i;
    while (j + 1 < members.size() && members[j + 1] == members[j] + 1) ++j;
    if (i > 0) out += ",";
    out += std::to_string(members[i]);
    if (j > i) out += "-" + std::to_string(members[j]);
    i = j + 1;
  }
  return out + "}";
}

}  // namespace

std::string to_string(const ValueTag& tag) {
  return "block " + std::to_string(tag.block) + " from " + format_members(tag.contributors);
}

std::vector<RankState> initial_state(const CommSchedule& schedule, const SimulationOptions& options) {
  Machine m(schedule, options);
  m.load_inputs();
  return m.dump();
}

std::vector<RankState> execute(const CommSchedule& schedule, const std::vector<RankState>& initial,
                               const SimulationOptions& options) {
  Machine m(schedule, options);
  m.load(initial);
  m.run();
  return m.dump();
}

std::vector<RankState> oracle(Collective collective, std::uint64_t p, Rank root,
                              std::uint32_t num_blocks, unsigned segments,
                              const std::vector<std::uint32_t>& owned) {
  const BufferShape shape{collective, p, root, num_blocks, segments, &owned};
  std::vector<Rank> everyone(p);
  for (Rank r = 0; r < p; ++r) everyone[r] = r;
  std::vector<RankState> out(p);
  for (Rank r = 0; r < p; ++r) {
    out[r].rank = r;
    out[r].slots.resize(shape.slots());
    for (std::uint64_t k = 0; k < shape.slots(); ++k) {
      const detail::Expectation e = detail::expected_slot(shape, r, k);
      if (!e.specified) continue;
      out[r].slots[k] = ValueTag{e.block, e.origin ? std::vector<Rank>{*e.origin} : everyone};
    }
  }
  return out;
}

std::string VerifyReport::to_json() const {
  nlohmann::json j{{"collective", std::string(to_string(collective))},
                   {"algorithm", algorithm},
                   {"p", p},
                   {"root", root},
                   {"segments", segments},
                   {"pass", passed}};
  if (divergence) {
    j["divergence"] = {{"rank", divergence->rank},
                       {"slot", divergence->slot},
                       {"expected", divergence->expected},
                       {"actual", divergence->actual}};
  }
  if (defect) j["defect"] = *defect;
  return j.dump();
}

VerifyReport verify(const CommSchedule& schedule, const SimulationOptions& options) {
  VerifyReport report;
  report.collective = schedule.collective;
  report.algorithm = schedule.algorithm;
  report.p = schedule.p;
  report.root = schedule.root;
  report.segments = options.segments;
  try {
    Machine m(schedule, options);
    m.load_inputs();
    m.run();
    report.divergence = m.compare();
    report.passed = !report.divergence;
  } catch (const ScheduleDefect& e) {
    report.defect = e.what();
  } catch (const DomainError& e) {
    report.defect = e.what();
  }
  return report;
}

Mutation random_mutation(const CommSchedule& schedule, std::mt19937_64& rng) {
  std::size_t total = 0;
  for (const auto& step : schedule.steps) total += step.size();
  if (total == 0) throw DomainError("schedule has no transfers to mutate");
  std::size_t pick = std::uniform_int_distribution<std::size_t>(0, total - 1)(rng);
  Mutation m;
  while (pick >= schedule.steps[m.step].size()) pick -= schedule.steps[m.step++].size();
  m.transfer = pick;
  const Transfer& x = schedule.steps[m.step][m.transfer];
  const bool retarget = schedule.p >= 3 && std::bernoulli_distribution(0.5)(rng);
  if (!retarget) return m;
  m.kind = MutationKind::Retarget;
  // Uniform over ranks other than src and dst.
  auto candidate = std::uniform_int_distribution<std::uint64_t>(0, schedule.p - 3)(rng);
  for (Rank skip : {std::min(x.src, x.dst), std::max(x.src, x.dst)}) {
    if (candidate >= skip) ++candidate;
  }
  m.new_dst = static_cast<Rank>(candidate);
  return m;
}

CommSchedule apply_mutation(const CommSchedule& schedule, const Mutation& mutation) {
  CommSchedule out = schedule;
  auto& step = out.steps.at(mutation.step);
  if (mutation.kind == MutationKind::Remove) {
    step.erase(step.begin() + static_cast<std::ptrdiff_t>(mutation.transfer));
  } else {
    step.at(mutation.transfer).dst = mutation.new_dst;
  }
  return out;
}

}  // namespace bine
