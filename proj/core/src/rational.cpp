#include "agepir/rational.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>

#include "agepir/errors.hpp"

namespace agepir {

double to_double(const Rat& x) { return x.convert_to<double>(); }

std::vector<double> to_doubles(const std::vector<Rat>& xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const Rat& x : xs) out.push_back(to_double(x));
  return out;
}

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string s = text;
  // trim
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw ConfigError("empty number");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      throw ConfigError("bad fraction '" + text + "'");
    Int n(num), d(den);
    if (d == 0) throw ConfigError("zero denominator in '" + text + "'");
    return Rat(n, d);
  }

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '+' || whole[0] == '-')) whole.erase(whole.begin());
    if (whole.empty()) whole = "0";
    if (frac.empty()) frac = "0";
    if (!is_integer_token(whole) || !is_integer_token(frac))
      throw ConfigError("bad decimal '" + text + "'");
    Int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int value = Int(whole) * scale + Int(frac);
    Rat r(value, scale);
    return neg ? Rat(-r) : r;
  }

  if (!is_integer_token(s)) throw ConfigError("bad number '" + text + "'");
  return Rat(Int(s));
}

std::string format_rational(const Rat& x) {
  const Int num = numerator(x);
  const Int den = denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_double(double x) {
  char buf[64];
  // Shortest representation that round-trips.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    double back = 0;
    std::sscanf(buf, "%lf", &back);
    if (back == x) return buf;
  }
  return buf;
}

}  // namespace agepir
