#pragma once

#include <json.hpp>

#include "largeness/spaces.hpp"

namespace largeness::cli {

// Builds a space from its JSON description:
//   {"kind": "grid", "dimension": d, "resolution": r}
//   {"kind": "circle", "resolution": r}
//   {"kind": "ultrametric", "depth": n}
//   {"kind": "matrix", "path": "file.csv"} or {"kind": "matrix", "values": [[...]]}
//   {"kind": "power", "base": {...}, "k": k, "exponent": p | "inf", "representation": "implicit"|"explicit"}
//   {"kind": "scaled", "base": {...}, "factor": a}
//   {"kind": "hilbert_cube" | "banach_cube", "base": {...}, "weights": W}
// with W one of {"kind": "geometric", "lambda": l, "depth": n},
// {"kind": "polynomial", "alpha": a, "depth": n}, {"kind": "explicit", "values": [...]}.
// Unknown fields are rejected with DomainError. Matrix spaces are validated.
FiniteMetricSpace build_space_from_json(const nlohmann::json& spec, const SpaceLimits& limits);

// Accepts inline JSON text or a path to a JSON file.
nlohmann::json load_json_argument(const std::string& text_or_path);

}  // namespace largeness::cli
