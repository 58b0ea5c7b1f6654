#pragma once

#include <string_view>

#include "sequence.hpp"

namespace hypsurf::sequence {

// Parses a schedule document:
//   {"name": str,
//    "levels": {"kind": "explicit", "values": [int, ...]}
//            | {"kind": "range", "start": int, "stop": int, "step": int = 1},
//    "pinch":  {"rule": "reciprocal" | "exponential" | "superexponential", "scale": num = 1}
//            | {"rule": "explicit", "values": [num, ...]}}
// Errors are DomainError with a message prefixed by the offending field path.
Schedule parse_schedule_json(std::string_view text);

}  // namespace hypsurf::sequence
