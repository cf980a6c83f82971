// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#include "bine/builders.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "bine/errors.hpp"

namespace bine {

namespace {

constexpr std::array<std::pair<Contiguity, std::string_view>, 3> kContiguityNames{{
    {Contiguity::Noncontig, "noncontig"},
    {Contiguity::PrePermute, "pre_permute"},
    {Contiguity::UnpermutedOutput, "unpermuted_output"},
}};

template <typename Enum, std::size_t N>
Enum lookup(const std::array<std::pair<std::string_view, Enum>, N>& table, std::string_view name,
            Collective c) {
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  throw UnsupportedConfiguration("unknown " + std::string(to_string(c)) + " variant '" +
                                 std::string(name) + "'");
}

constexpr std::array<std::pair<std::string_view, BcastVariant>, 5> kBcast{{
    {"bine_small", BcastVariant::BineSmall},
    {"bine_large", BcastVariant::BineLarge},
    {"binomial_doubling", BcastVariant::BinomialDoubling},
    {"binomial_halving", BcastVariant::BinomialHalving},
    {"binomial_sag", BcastVariant::BinomialSag},
}};
constexpr std::array<std::pair<std::string_view, ReduceVariant>, 3> kReduce{{
    {"bine_small", ReduceVariant::BineSmall},
    {"bine_large", ReduceVariant::BineLarge},
    {"binomial", ReduceVariant::Binomial},
}};
constexpr std::array<std::pair<std::string_view, GatherVariant>, 2> kGather{{
    {"bine", GatherVariant::Bine},
    {"binomial", GatherVariant::Binomial},
}};
constexpr std::array<std::pair<std::string_view, ScatterVariant>, 2> kScatter{{
    {"bine", ScatterVariant::Bine},
    {"binomial", ScatterVariant::Binomial},
}};
constexpr std::array<std::pair<std::string_view, ReduceScatterVariant>, 3> kReduceScatter{{
    {"bine", ReduceScatterVariant::Bine},
    {"recursive_halving", ReduceScatterVariant::RecursiveHalving},
    {"ring", ReduceScatterVariant::Ring},
}};
constexpr std::array<std::pair<std::string_view, AllgatherVariant>, 5> kAllgather{{
    {"bine", AllgatherVariant::Bine},
    {"recursive_doubling", AllgatherVariant::RecursiveDoubling},
    {"ring", AllgatherVariant::Ring},
    {"bruck", AllgatherVariant::Bruck},
    {"sparbit_like", AllgatherVariant::SparbitLike},
}};
constexpr std::array<std::pair<std::string_view, AllreduceVariant>, 5> kAllreduce{{
    {"bine_small", AllreduceVariant::BineSmall},
    {"bine_large", AllreduceVariant::BineLarge},
    {"recursive_doubling", AllreduceVariant::RecursiveDoubling},
    {"ring", AllreduceVariant::Ring},
    {"rabenseifner_like", AllreduceVariant::RabenseifnerLike},
}};
constexpr std::array<std::pair<std::string_view, AlltoallVariant>, 4> kAlltoall{{
    {"bine", AlltoallVariant::Bine},
    {"bruck", AlltoallVariant::Bruck},
    {"pairwise", AlltoallVariant::Pairwise},
    {"linear", AlltoallVariant::Linear},
}};

template <std::size_t N, typename Enum>
std::vector<std::string_view> names_of(const std::array<std::pair<std::string_view, Enum>, N>& t) {
  std::vector<std::string_view> out;
  for (const auto& entry : t) out.push_back(entry.first);
  return out;
}

}  // namespace

std::string_view to_string(Contiguity c) noexcept {
  for (const auto& [k, name] : kContiguityNames) {
    if (k == c) return name;
  }
  return "unknown";
}

Contiguity parse_contiguity(std::string_view name) {
  for (const auto& [k, n] : kContiguityNames) {
    if (n == name) return k;
  }
  throw UnsupportedConfiguration("unknown contiguity '" + std::string(name) + "'");
}

CommSchedule build_schedule(const ScheduleRequest& r) {
  const Collective c = r.collective;
  if (c != Collective::ReduceScatter && r.contiguity != Contiguity::Noncontig) {
    throw UnsupportedConfiguration("contiguity applies to reduce_scatter only");
  }
  switch (c) {
    case Collective::Broadcast:
      return build_bcast(r.p, r.root, r.n, lookup(kBcast, r.variant, c));
    case Collective::Reduce:
      return build_reduce(r.p, r.root, r.n, lookup(kReduce, r.variant, c));
    case Collective::Gather:
      return build_gather(r.p, r.root, r.n, lookup(kGather, r.variant, c));
    case Collective::Scatter:
      return build_scatter(r.p, r.root, r.n, lookup(kScatter, r.variant, c));
    case Collective::ReduceScatter:
      return build_reduce_scatter(r.p, r.n, lookup(kReduceScatter, r.variant, c), r.contiguity);
    case Collective::Allgather:
      return build_allgather(r.p, r.n, lookup(kAllgather, r.variant, c));
    case Collective::Allreduce:
      return build_allreduce(r.p, r.n, lookup(kAllreduce, r.variant, c));
    case Collective::Alltoall:
      return build_alltoall(r.p, r.n, lookup(kAlltoall, r.variant, c));
  }
  throw UnsupportedConfiguration("unknown collective");
}

const std::vector<std::string_view>& variant_names(Collective c) {
  static const std::map<Collective, std::vector<std::string_view>> table{
      {Collective::Broadcast, names_of(kBcast)},
      {Collective::Reduce, names_of(kReduce)},
      {Collective::Gather, names_of(kGather)},
      {Collective::Scatter, names_of(kScatter)},
      {Collective::ReduceScatter, names_of(kReduceScatter)},
      {Collective::Allgather, names_of(kAllgather)},
      {Collective::Allreduce, names_of(kAllreduce)},
      {Collective::Alltoall, names_of(kAlltoall)},
  };
  return table.at(c);
}

bool requires_power_of_two(Collective c, std::string_view variant) {
  const auto& names = variant_names(c);
  if (std::find(names.begin(), names.end(), variant) == names.end()) {
    throw UnsupportedConfiguration("unknown " + std::string(to_string(c)) + " variant '" +
                                   std::string(variant) + "'");
  }
  return !(variant == "ring" || variant == "pairwise" || variant == "linear");
}

}  // namespace bine
