#pragma once

#include <json.hpp>

#include "padicjac/projline.hpp"

namespace padicjac {

using Json = nlohmann::ordered_json;

// {"v": integer or "inf", "unit": decimal string, "prec": N}; the unit is
// always reduced to [0, p^N).
Json padic_to_json(const Padic& x);
Padic padic_from_json(long prime, const Json& j);

// Exact rational from "a" or "a/b" decimal strings.
BigRat parse_rational(const std::string& s);
// Point from "a/b", "inf", or "[x0:x1]" with rational entries.
ProjPoint parse_point(long prime, long prec, const std::string& s);
std::string point_to_text(const ProjPoint& x);

struct JobConfig {
    long prime = 0;
    long precision = 24;
    long guard = 8;
    std::vector<std::array<BigRat, 4>> generators;
    int depth = 3;
    int trunc = 16;

    long working_prec() const { return precision + guard; }
};

// Validates the schema exactly; SchemaError carries the offending field
// path. EvenPrime and SingularGenerator reject bad mathematical input.
JobConfig parse_config(const Json& j);
JobConfig parse_config_text(const std::string& text);

} // namespace padicjac
