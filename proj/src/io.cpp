#include "jetfol/io.hpp"

#include <fstream>
#include <sstream>

namespace jetfol {

json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                     e.what() + ")");
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  throw InputError(where + ": coefficient must be a \"p/q\" string or an integer");
}

Fp fp_from_json(const json& j, const PrimeField& field, const std::string& where) {
  if (j.is_object()) {
    if (!j.contains("mod") || !j.contains("val") || !j["mod"].is_number_unsigned() || !j["val"].is_number_unsigned())
      throw InputError(where + ": expected {\"mod\": p, \"val\": v}");
    if (j["mod"].get<std::uint64_t>() != field.p)
      throw InputError(where + ": modulus " + j["mod"].dump() + " does not match ring " + field.name());
    const auto v = j["val"].get<std::uint64_t>();
    if (v >= field.p) throw InputError(where + ": value not reduced modulo " + std::to_string(field.p));
    return Fp(field.p, v);
  }
  try {
    return field.from_rational(rational_from_json(j, where));
  } catch (const NotInvertible& e) {
    throw InputError(where + ": " + e.what());
  }
}

namespace detail {

int int_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  if (!j[key].is_number_integer()) throw InputError(where + ": \"" + key + "\" must be an integer");
  return j[key].get<int>();
}

}  // namespace detail

}  // namespace jetfol
