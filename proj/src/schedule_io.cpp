// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/schedule_io.hpp"

#include <json.hpp>
#include <ostream>

#include "bine/errors.hpp"

namespace bine {

using nlohmann::json;

std::string schedule_to_json(const CommSchedule& s, int indent) {
  json steps = json::array();
  for (std::size_t t = 0; t < s.steps.size(); ++t) {
    json transfers = json::array();
    for (const Transfer& x : s.steps[t]) {
      json entry{{"src", x.src},
                 {"dst", x.dst},
                 {"blocks", x.blocks},
                 {"bytes", x.bytes()},
                 {"reduce", x.reduce}};
      if (!x.dst_blocks.empty()) entry["dst_blocks"] = x.dst_blocks;
      transfers.push_back(std::move(entry));
    }
    steps.push_back({{"step", t}, {"transfers", std::move(transfers)}});
  }
  json j{{"collective", std::string(to_string(s.collective))},
         {"algorithm", s.algorithm},
         {"p", s.p},
         {"root", s.root},
         {"n", s.n},
         {"num_blocks", s.num_blocks},
         {"block_bytes", s.block_bytes},
         {"single_ported", s.single_ported},
         {"steps", std::move(steps)}};
  if (!s.initial_permutation.empty()) j["initial_permutation"] = s.initial_permutation;
  if (!s.final_permutation.empty()) j["final_permutation"] = s.final_permutation;
  if (!s.result_blocks.empty()) j["result_blocks"] = s.result_blocks;
  return j.dump(indent);
}

CommSchedule schedule_from_json(std::string_view text) {
  CommSchedule s;
  try {
    const json j = json::parse(text);
    s.collective = parse_collective(j.at("collective").get<std::string>());
    s.algorithm = j.at("algorithm").get<std::string>();
    s.p = j.at("p").get<std::uint64_t>();
    s.root = j.at("root").get<Rank>();
    s.n = j.at("n").get<std::uint64_t>();
    s.num_blocks = j.at("num_blocks").get<std::uint32_t>();
    s.block_bytes = j.at("block_bytes").get<std::uint64_t>();
    s.single_ported = j.at("single_ported").get<bool>();
    const json& steps = j.at("steps");
    for (std::size_t t = 0; t < steps.size(); ++t) {
      if (steps[t].at("step").get<std::size_t>() != t) {
        throw ParseError(0, "steps out of order at index " + std::to_string(t));
      }
      auto& out = s.steps.emplace_back();
      for (const json& entry : steps[t].at("transfers")) {
        Transfer x;
        x.src = entry.at("src").get<Rank>();
        x.dst = entry.at("dst").get<Rank>();
        x.blocks = entry.at("blocks").get<std::vector<std::uint32_t>>();
        if (entry.contains("dst_blocks")) {
          x.dst_blocks = entry["dst_blocks"].get<std::vector<std::uint32_t>>();
        }
        x.reduce = entry.at("reduce").get<bool>();
        x.block_bytes = s.block_bytes;
        if (entry.at("bytes").get<std::uint64_t>() != x.bytes()) {
          throw ParseError(0, "transfer byte count does not match its blocks at step " +
                                  std::to_string(t));
        }
        out.push_back(std::move(x));
      }
    }
    if (j.contains("initial_permutation")) {
      s.initial_permutation = j["initial_permutation"].get<std::vector<Permutation>>();
    }
    if (j.contains("final_permutation")) {
      s.final_permutation = j["final_permutation"].get<std::vector<Permutation>>();
    }
    if (j.contains("result_blocks")) {
      s.result_blocks = j["result_blocks"].get<std::vector<std::uint32_t>>();
    }
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("invalid schedule JSON: ") + e.what());
  } catch (const UnsupportedConfiguration& e) {
    throw ParseError(0, e.what());
  }
  return s;
}

void write_schedule_csv(std::ostream& out, const CommSchedule& s) {
  out << "step,src,dst,bytes,reduce,blocks\n";
  for (std::size_t t = 0; t < s.steps.size(); ++t) {
    for (const Transfer& x : s.steps[t]) {
      out << t << ',' << x.src << ',' << x.dst << ',' << x.bytes() << ',' << (x.reduce ? 1 : 0) << ',';
      for (std::size_t k = 0; k < x.blocks.size(); ++k) out << (k ? " " : "") << x.blocks[k];
      out << '\n';
    }
  }
}

std::string tree_to_json(const CommTree& tree, int indent) {
  json edges = json::array();
  for (const TreeEdge& e : tree.edges()) {
    edges.push_back({{"child", e.child}, {"parent", e.parent}, {"step", e.step}});
  }
  json j{{"kind", std::string(to_string(tree.kind()))},
         {"p", tree.size()},
         {"root", tree.root()},
         {"edges", std::move(edges)}};
  return j.dump(indent);
}

}  // namespace bine
