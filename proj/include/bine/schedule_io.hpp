// Copyright 2026 The Bine Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "bine/schedule.hpp"
#include "bine/trees.hpp"

namespace bine {

/// Canonical JSON dump; byte-identical for equal schedules.
std::string schedule_to_json(const CommSchedule& schedule, int indent = -1);

/// Inverse of schedule_to_json. Throws ParseError on malformed input,
/// including transfers whose byte count disagrees with their blocks.
CommSchedule schedule_from_json(std::string_view text);

/// One row per transfer: `step,src,dst,bytes,reduce,blocks` with blocks
/// separated by spaces.
void write_schedule_csv(std::ostream& out, const CommSchedule& schedule);

/// {"kind", "p", "root", "edges": [{"child", "parent", "step"}]}
std::string tree_to_json(const CommTree& tree, int indent = -1);

}  // namespace bine
