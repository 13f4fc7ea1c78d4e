#include "repsel/rational.hpp"

#include "repsel/errors.hpp"

#include <cctype>
#include <cstdlib>

namespace repsel {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void reject(std::string_view text) {
  throw ParseError("not a rational number: \"" + std::string(text) + "\"");
}

Rational parse_decimal(std::string_view text, std::string_view body) {
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    body = body.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) reject(text);
    exponent = std::strtol(std::string(exp_text).c_str(), nullptr, 10);
    if (exp_negative) exponent = -exponent;
  }

  std::string_view whole = body;
  std::string_view fraction;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    whole = body.substr(0, dot);
    fraction = body.substr(dot + 1);
    if (!fraction.empty() && !all_digits(fraction)) reject(text);
  }
  if (!whole.empty() && !all_digits(whole)) reject(text);
  if (whole.empty() && fraction.empty()) reject(text);

  Integer digits(std::string(whole).append(fraction).insert(0, "0"), 10);
  exponent -= static_cast<long>(fraction.size());

  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational value = exponent < 0 ? Rational(digits, scale) : Rational(digits * scale);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
  if (body.empty()) reject(text);

  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) reject(text);
    Integer p(std::string(num), 10);
    Integer q(std::string(den), 10);
    if (q == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
    Rational value(negative ? Integer(-p) : p, q);
    value.canonicalize();
    return value;
  }
  return parse_decimal(text, body);
}

std::string to_string(const Rational& value) { return value.get_str(10); }

std::string truncate_2dp(const Rational& value) {
  Integer scaled;
  Integer hundredfold = value.get_num() * 100;
  mpz_tdiv_q(scaled.get_mpz_t(), hundredfold.get_mpz_t(), value.get_den_mpz_t());

  const bool negative = sgn(value) < 0 && scaled != 0;
  Integer magnitude = abs(scaled);
  Integer whole = magnitude / 100;
  Integer cents = magnitude % 100;
  std::string out = negative ? "-" : "";
  out += whole.get_str();
  out += '.';
  if (cents < 10) out += '0';
  out += cents.get_str();
  return out;
}

double to_double(const Rational& value) { return value.get_d(); }

Rational sum(std::span<const Rational> values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace repsel
