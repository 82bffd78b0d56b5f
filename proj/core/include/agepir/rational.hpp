#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace agepir {

// All capacity-region and peak-AoI arithmetic is exact. Floating point enters
// only where square roots do (the average-AoI stationary points) and in the
// simulator.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

double to_double(const Rat& x);

// Accepts integers ("3"), fractions ("4/7", "-1/3"), and plain decimals
// ("0.25", "1.5"). Decimals convert exactly (base-10 expansion as a rational).
// Throws ConfigError on anything else, including empty input.
Rat parse_rational(const std::string& text);

// "p/q" with q > 0, or just "p" for integers. Canonical (reduced) form.
std::string format_rational(const Rat& x);

// Deterministic shortest-round-trip double formatting ("%.17g" trimmed).
std::string format_double(double x);

std::vector<double> to_doubles(const std::vector<Rat>& xs);

}  // namespace agepir
