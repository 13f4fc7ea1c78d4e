#include "repsel/io.hpp"

#include "repsel/errors.hpp"

#include <fstream>
#include <sstream>

namespace repsel {
namespace {

using Json = nlohmann::json;

/// DOM builder that keeps floating-point literals as their source text, so
/// decimals convert to rationals without passing through binary floating point.
class ExactNumberSax {
 public:
  explicit ExactNumberSax(Json& root) : dom_(root) {}

  bool null() { return dom_.null(); }
  bool boolean(bool v) { return dom_.boolean(v); }
  bool number_integer(Json::number_integer_t v) { return dom_.number_integer(v); }
  bool number_unsigned(Json::number_unsigned_t v) { return dom_.number_unsigned(v); }
  bool number_float(Json::number_float_t, const Json::string_t& text) {
    Json::string_t copy = text;
    return dom_.string(copy);
  }
  bool string(Json::string_t& v) { return dom_.string(v); }
  bool binary(Json::binary_t& v) { return dom_.binary(v); }
  bool start_object(std::size_t n) { return dom_.start_object(n); }
  bool key(Json::string_t& v) { return dom_.key(v); }
  bool end_object() { return dom_.end_object(); }
  bool start_array(std::size_t n) { return dom_.start_array(n); }
  bool end_array() { return dom_.end_array(); }
  template <class Exception>
  bool parse_error(std::size_t position, const std::string& token, const Exception& ex) {
    return dom_.parse_error(position, token, ex);
  }

 private:
  nlohmann::detail::json_sax_dom_parser<Json> dom_;
};

Rational to_rational(const Json& value) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number_unsigned()) return Rational(Integer(std::to_string(value.get<std::uint64_t>())));
  if (value.is_number_integer()) return Rational(Integer(std::to_string(value.get<std::int64_t>())));
  throw ParseError("matrix entries must be numbers or \"p/q\" strings, got " + value.dump());
}

}  // namespace

RepresentationMatrix parse_matrix_json(std::string_view text) {
  Json doc;
  ExactNumberSax sax(doc);
  try {
    Json::sax_parse(text, &sax);
  } catch (const Json::exception& e) {
    throw ParseError(std::string("invalid matrix JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
    throw ParseError("matrix JSON needs a \"rows\" array");
  }

  std::vector<RationalVector> rows;
  for (const auto& row : doc["rows"]) {
    if (!row.is_array()) throw ParseError("every entry of \"rows\" must be an array");
    RationalVector parsed;
    for (const auto& entry : row) parsed.push_back(to_rational(entry));
    rows.push_back(std::move(parsed));
  }

  if (doc.contains("n")) {
    const Rational n = to_rational(doc["n"]);
    if (n != Rational(static_cast<long>(rows.size()))) {
      throw ParseError("\"n\" is " + to_string(n) + " but there are " + std::to_string(rows.size()) + " rows");
    }
  }

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) throw ParseError("\"labels\" must be an array of strings");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw ParseError("\"labels\" must be an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return RepresentationMatrix::validate(rows, std::move(labels));
}

RepresentationMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix_json(buffer.str());
}

nlohmann::ordered_json matrix_to_json(const RepresentationMatrix& gamma) {
  nlohmann::ordered_json doc;
  doc["n"] = gamma.n();
  doc["labels"] = gamma.labels();
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < gamma.n(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (const auto& e : gamma.row(i)) row.push_back(to_string(e));
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

void write_matrix_file(const RepresentationMatrix& gamma, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << matrix_to_json(gamma).dump(2) << '\n';
}

}  // namespace repsel
