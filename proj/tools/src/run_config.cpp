#include "dhlab_cli/run_config.hpp"

#include <charconv>
#include <cmath>

#include "dhlab/errors.hpp"
#include "dhlab/experiments.hpp"
#include "dhlab/measure.hpp"

namespace dhlab::cli {
namespace {

constexpr const char* kModule = "cli";

enum class Kind { Str, Int, Real, OptReal, Bool, RealList, ComplexList };

struct Key {
  const char* name;
  Kind kind;
};

std::vector<Key> keys_for(const std::string& command, const std::string& op) {
  std::vector<Key> keys = {{"command", Kind::Str}};
  if (command == "moments") {
    keys.insert(keys.end(), {{"measure", Kind::Str}, {"order", Kind::Int}});
  } else if (command == "apply") {
    keys.insert(keys.end(), {{"operator", Kind::Str}, {"measure", Kind::Str}, {"function", Kind::Str}});
    if (op == "integral") {
      keys.push_back({"alpha", Kind::OptReal});
    } else {
      keys.push_back({"N", Kind::Int});
    }
    keys.push_back({"z", Kind::ComplexList});
    if (op != "hilbert") keys.push_back({"space", Kind::Str});
    if (op == "dh") keys.push_back({"check_equivalence", Kind::Bool});
  } else if (command == "carleson") {
    keys.insert(keys.end(), {{"measure", Kind::Str}, {"s", Kind::OptReal}, {"beta", Kind::Real}, {"k_max", Kind::Int}});
  } else if (command == "experiment") {
    keys.insert(keys.end(), {{"theorem", Kind::Str},
                             {"measure", Kind::Str},
                             {"alpha", Kind::OptReal},
                             {"b_ladder", Kind::RealList},
                             {"grid_nr", Kind::Int},
                             {"grid_ntheta", Kind::Int},
                             {"a_angles", Kind::Int},
                             {"r", Kind::OptReal}});
  } else {
    throw ParseError(kModule, "config", "unknown command '" + command + "'");
  }
  keys.insert(keys.end(), {{"format", Kind::Str}, {"out", Kind::Str}});
  return keys;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json get(const RunConfig& c, const std::string& key) {
  if (key == "command") return c.command;
  if (key == "operator") return c.op;
  if (key == "measure") return c.measure;
  if (key == "function") return c.function;
  if (key == "theorem") return c.theorem;
  if (key == "order") return c.order;
  if (key == "N") return c.N;
  if (key == "alpha") return optional_json(c.alpha);
  if (key == "s") return optional_json(c.s);
  if (key == "beta") return c.beta;
  if (key == "k_max") return c.k_max;
  if (key == "z") {
    Json arr = Json::array();
    for (const cd& z : c.z) arr.push_back(format_complex(z));
    return arr;
  }
  if (key == "space") return c.space;
  if (key == "check_equivalence") return c.check_equivalence;
  if (key == "b_ladder") return c.b_ladder;
  if (key == "grid_nr") return c.grid_nr;
  if (key == "grid_ntheta") return c.grid_ntheta;
  if (key == "a_angles") return c.a_angles;
  if (key == "r") return optional_json(c.r);
  if (key == "format") return c.format;
  return c.out;
}

[[noreturn]] void type_error(const std::string& key, const Json& value) {
  throw ParseError(kModule, "config", "key '" + key + "' has the wrong type: " + value.dump());
}

double as_real(const std::string& key, const Json& v) {
  if (!v.is_number()) type_error(key, v);
  return v.get<double>();
}

int as_int(const std::string& key, const Json& v) {
  if (!v.is_number_integer()) type_error(key, v);
  return v.get<int>();
}

std::string as_string(const std::string& key, const Json& v) {
  if (!v.is_string()) type_error(key, v);
  return v.get<std::string>();
}

void put(RunConfig& c, const std::string& key, const Json& v) {
  auto opt = [&](std::optional<double>& slot) {
    if (v.is_null()) {
      slot.reset();
    } else {
      slot = as_real(key, v);
    }
  };
  if (key == "command") c.command = as_string(key, v);
  else if (key == "operator") c.op = as_string(key, v);
  else if (key == "measure") c.measure = as_string(key, v);
  else if (key == "function") c.function = as_string(key, v);
  else if (key == "theorem") c.theorem = as_string(key, v);
  else if (key == "order") c.order = as_int(key, v);
  else if (key == "N") c.N = as_int(key, v);
  else if (key == "alpha") opt(c.alpha);
  else if (key == "s") opt(c.s);
  else if (key == "beta") c.beta = as_real(key, v);
  else if (key == "k_max") c.k_max = as_int(key, v);
  else if (key == "z") {
    if (!v.is_array()) type_error(key, v);
    c.z.clear();
    for (const auto& item : v) c.z.push_back(parse_complex(as_string(key, item)));
  } else if (key == "space") c.space = as_string(key, v);
  else if (key == "check_equivalence") {
    if (!v.is_boolean()) type_error(key, v);
    c.check_equivalence = v.get<bool>();
  } else if (key == "b_ladder") {
    if (!v.is_array()) type_error(key, v);
    c.b_ladder.clear();
    for (const auto& item : v) c.b_ladder.push_back(as_real(key, item));
  } else if (key == "grid_nr") c.grid_nr = as_int(key, v);
  else if (key == "grid_ntheta") c.grid_ntheta = as_int(key, v);
  else if (key == "a_angles") c.a_angles = as_int(key, v);
  else if (key == "r") opt(c.r);
  else if (key == "format") c.format = as_string(key, v);
  else if (key == "out") c.out = as_string(key, v);
}

double parse_real(std::string_view text, const std::string& what) {
  double value = 0.0;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError(kModule, "parse", what + ": not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ParseError(kModule, "validate", std::string(name) + " must be a finite number");
}

[[noreturn]] void out_of_range(const std::string& message) { throw PreconditionError(kModule, "validate", message); }

}  // namespace

cd parse_complex(const std::string& text) {
  if (text.empty()) throw ParseError(kModule, "parse_complex", "empty complex number");
  if (text.back() != 'i') return {parse_real(text, "complex"), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // split at the last sign that is not a leading sign or an exponent sign
  std::size_t cut = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      cut = i;
      break;
    }
  }
  if (cut == std::string::npos) return {0.0, parse_real(body, "complex '" + text + "'")};
  const double re = parse_real(body.substr(0, cut), "complex '" + text + "'");
  std::string im = body.substr(cut);
  if (im.front() == '+') im.erase(0, 1);
  return {re, parse_real(im, "complex '" + text + "'")};
}

std::string format_complex(cd z) {
  if (z.imag() == 0.0) return format_number(z.real());
  if (z.real() == 0.0) return format_number(z.imag()) + "i";
  return format_number(z.real()) + (z.imag() < 0.0 ? "" : "+") + format_number(z.imag()) + "i";
}

Space parse_space(const std::string& text) {
  if (text == "bmoa") return Space::bmoa();
  if (text.starts_with("bloch:")) {
    const double a = parse_real(std::string_view(text).substr(6), "space");
    if (!(a > 0.0)) throw PreconditionError(kModule, "parse_space", "Bloch exponent must be positive");
    return Space::bloch(a);
  }
  throw ParseError(kModule, "parse_space", "expected 'bmoa' or 'bloch:<alpha>' but got '" + text + "'");
}

std::vector<cd> default_z_grid() { return {0.0, 0.5, -0.5, {0.0, 0.5}, 0.9, -0.9, {0.0, -0.9}}; }

RunConfig normalize(RunConfig c) {
  keys_for(c.command, c.op);  // rejects unknown commands
  if (c.format != "json" && c.format != "csv") {
    throw ParseError(kModule, "validate", "format must be json or csv, got '" + c.format + "'");
  }
  if (c.measure.empty()) throw ParseError(kModule, "validate", "a measure spec is required");
  (void)parse_measure(c.measure);

  if (c.command == "moments") {
    if (c.order < 0 || c.order > 20000) out_of_range("order must lie in [0, 20000]");
  } else if (c.command == "apply") {
    if (c.op != "dh" && c.op != "hilbert" && c.op != "integral") {
      throw ParseError(kModule, "validate", "operator must be dh, hilbert or integral, got '" + c.op + "'");
    }
    (void)parse_function(c.function);
    if (c.op == "integral") {
      if (!c.alpha) c.alpha = 2.0;
      require_finite(*c.alpha, "alpha");
      if (*c.alpha < 1.0) out_of_range("the integral operator needs alpha >= 1");
    } else if (c.N < 1 || c.N > 4096) {
      out_of_range("N must lie in [1, 4096]");
    }
    if (c.check_equivalence && c.op != "dh") {
      throw ParseError(kModule, "validate", "check_equivalence applies to the dh operator only");
    }
    if (c.z.empty()) c.z = default_z_grid();
    for (const cd& z : c.z) {
      if (!(std::abs(z) < 1.0)) out_of_range("z = " + format_complex(z) + " is not in the open unit disk");
    }
    if (c.op != "hilbert") (void)parse_space(c.space);
  } else if (c.command == "carleson") {
    if (!c.s) throw ParseError(kModule, "validate", "carleson needs --s");
    require_finite(*c.s, "s");
    require_finite(c.beta, "beta");
    if (!(*c.s > 0.0)) out_of_range("s must be positive");
    if (c.beta < 0.0) out_of_range("beta must be >= 0");
    if (c.k_max < 4 || c.k_max > 60) out_of_range("k_max must lie in [4, 60]");
  } else {
    const Theorem t = parse_theorem(c.theorem);
    if (!c.alpha) c.alpha = 0.5;
    require_finite(*c.alpha, "alpha");
    c.alpha = checked_alpha(t, *c.alpha);
    if (c.b_ladder.size() < 2) out_of_range("the b ladder needs at least two rungs");
    for (std::size_t i = 0; i < c.b_ladder.size(); ++i) {
      require_finite(c.b_ladder[i], "b");
      if (!(c.b_ladder[i] > 0.0 && c.b_ladder[i] < 1.0)) out_of_range("every b must lie in (0,1)");
      if (i > 0 && !(c.b_ladder[i] > c.b_ladder[i - 1])) out_of_range("the b ladder must increase");
    }
    if (c.grid_nr < 16 || c.grid_nr > 1024 || c.grid_nr % 16 != 0) {
      out_of_range("grid_nr must be a multiple of 16 in [16, 1024]");
    }
    if (c.grid_ntheta < 8 || c.grid_ntheta > 65536) out_of_range("grid_ntheta must lie in [8, 65536]");
    if (c.a_angles < 1 || c.a_angles > 64) out_of_range("a_angles must lie in [1, 64]");
    if (c.r) {
      require_finite(*c.r, "r");
      if (!(*c.r >= 0.0 && *c.r < 1.0)) out_of_range("r must lie in [0,1)");
    }
  }
  return c;
}

Json to_json(const RunConfig& config) {
  Json doc = Json::object();
  for (const Key& k : keys_for(config.command, config.op)) doc[k.name] = get(config, k.name);
  return doc;
}

RunConfig config_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError(kModule, "config", "config must be an object");
  RunConfig c;
  if (!doc.contains("command")) throw ParseError(kModule, "config", "config has no 'command'");
  c.command = as_string("command", doc["command"]);
  if (doc.contains("operator")) c.op = as_string("operator", doc["operator"]);
  const auto keys = keys_for(c.command, c.op);
  for (const auto& [name, value] : doc.items()) {
    bool known = false;
    for (const Key& k : keys) known = known || name == k.name;
    if (!known) throw ParseError(kModule, "config", "unknown key '" + name + "' for command " + c.command);
    put(c, name, value);
  }
  return c;
}

RunConfig config_from_flat(const std::map<std::string, std::string>& fields) {
  const auto cmd = fields.find("command");
  if (cmd == fields.end()) throw ParseError(kModule, "config", "config has no 'command'");
  const auto op = fields.find("operator");
  const auto keys = keys_for(cmd->second, op == fields.end() ? "" : op->second);
  Json doc = Json::object();
  for (const auto& [name, text] : fields) {
    const Key* key = nullptr;
    for (const Key& k : keys) {
      if (name == k.name) key = &k;
    }
    if (!key) throw ParseError(kModule, "config", "unknown key '" + name + "' for command " + cmd->second);
    switch (key->kind) {
      case Kind::Str:
        doc[name] = text;
        break;
      case Kind::Int: {
        int v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
          throw ParseError(kModule, "config", "key '" + name + "' is not an integer: '" + text + "'");
        }
        doc[name] = v;
        break;
      }
      case Kind::Real:
        doc[name] = parse_real(text, name);
        break;
      case Kind::OptReal:
        doc[name] = text.empty() ? Json(nullptr) : Json(parse_real(text, name));
        break;
      case Kind::Bool:
        if (text != "true" && text != "false") {
          throw ParseError(kModule, "config", "key '" + name + "' is not a boolean: '" + text + "'");
        }
        doc[name] = text == "true";
        break;
      case Kind::RealList: {
        Json arr = Json::array();
        if (!text.empty()) {
          for (const auto& part : split(text, ';')) arr.push_back(parse_real(part, name));
        }
        doc[name] = arr;
        break;
      }
      case Kind::ComplexList: {
        Json arr = Json::array();
        if (!text.empty()) {
          for (const auto& part : split(text, ';')) arr.push_back(part);
        }
        doc[name] = arr;
        break;
      }
    }
  }
  return config_from_json(doc);
}

}  // namespace dhlab::cli
