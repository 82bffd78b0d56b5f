#pragma once

#include <iosfwd>
#include <string>

#include "agepir/model.hpp"

namespace agepir {

// Flat key = value text. Keys: N, M, L, mu, sigma2, r_min, family (optional;
// one entry or one per server). Lists are whitespace- or comma-separated.
// Numbers are integers, decimals, or exact fractions like 4/7. '#' starts a
// comment. Errors carry file and line. The parsed config is validated.
SystemConfig parse_config(std::istream& in, const std::string& name);
SystemConfig load_config(const std::string& path);

// Line-delimited solution interchange (fixed field order, exact rationals);
// what `solve --format structured` prints and `simulate --policy` reads.
void write_solution(std::ostream& out, const Solution& solution);
Solution parse_solution(std::istream& in, const std::string& name);
Solution load_solution(const std::string& path);

}  // namespace agepir
