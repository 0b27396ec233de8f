#pragma once

// JSON file formats.
//   order:      {"n": 3, "p": 2, "rounds": [[1,1],[2,2],...]}
//   profile:    {"n": 3, "p": 2, "preferences": [[[1,2],[2,1],...], ...]}
//               bundles may also be written as digit strings ("12") when n <= 9
//   allocation: {"bundles": {"1": [1,2], "2": [2,1], ...}}
//   script:     [item, ...] one item per category, in the agent's pick order
// Parse failures throw ValidationError naming the source, the JSON location
// and the violated invariant.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "catalloc/bounds.hpp"
#include "catalloc/domain.hpp"
#include "catalloc/mechanism.hpp"
#include "catalloc/picking_order.hpp"

namespace catalloc {

using Json = nlohmann::json;

Json read_json_file(const std::string& path);

PickingOrder order_from_json(const Json& j, const std::string& source);
Profile profile_from_json(const Json& j, const std::string& source);
Allocation allocation_from_json(const Json& j, const DomainShape& shape, const std::string& source);

PickingOrder read_order(const std::string& path);
Profile read_profile(const std::string& path);

Json to_json(const Bundle& bundle);
Json to_json(const PickingOrder& order);
Json to_json(const Profile& profile);
Json to_json(const Allocation& alloc);
Json to_json(const RankBoundReport& report);
Json to_json(const TraceRound& round);

// "opt,pess,script:FILE" aligned to agents 1..n. Script files are read
// relative to the working directory.
BehaviorAssignment parse_behaviors(const std::string& spec, int agents);

// One JSON object per round, newline separated.
void write_trace_lines(std::ostream& out, const ExecutionTrace& trace);

}  // namespace catalloc
