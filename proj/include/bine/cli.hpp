// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bine/schedule.hpp"
#include "bine/topology.hpp"

namespace bine {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Maps "auto" to a concrete variant: bine_small below `cutover` bytes and
/// bine_large from there on for broadcast, reduce and allreduce; "bine" for
/// the other collectives. Other names pass through.
std::string resolve_variant(Collective collective, std::string_view variant, std::uint64_t n,
                            std::uint64_t cutover);

/// "block:<g>" over p ranks, or "file:<path>" holding the allocation of a
/// single job (the first job when the file has several).
GroupMap parse_group_spec(std::string_view spec, std::uint64_t p);

/// Entry point of the `bine` tool; returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bine
