#include "adjbraid/io.hpp"

#include <json.hpp>

#include "adjbraid/errors.hpp"

namespace adjbraid {

using ojson = nlohmann::ordered_json;

namespace {

ojson parse_json(std::string_view text) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
}

const ojson& field(const ojson& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(std::string("JSON document lacks \"") + name + "\"");
  return j.at(name);
}

std::string string_field(const ojson& j, const char* name) {
  const ojson& v = field(j, name);
  if (!v.is_string()) throw Error(std::string("\"") + name + "\" must be a string");
  return v.get<std::string>();
}

void check_schema(const ojson& j) {
  if (j.contains("schema") && j.at("schema") != kSchemaVersion) {
    throw Error("unsupported schema version " + j.at("schema").dump());
  }
}

Partition support_of(const ojson& j, const GroundPtr* ground) {
  std::string s = string_field(j, "support");
  return ground ? Partition::parse(s, *ground) : Partition::parse(s);
}

Shard shard_from(const ojson& j, const GroundPtr* ground) {
  Partition p = support_of(j, ground);
  auto keys = keys_of(p);
  const ojson& signs = field(j, "signs");
  if (!signs.is_object()) throw Error("\"signs\" must be an object");
  std::vector<char> per_key(keys->size(), 0);
  for (const auto& [name, value] : signs.items()) {
    Subset e;
    const GroundSet& g = p.ground();
    if (g.compact()) {
      for (char c : name) {
        auto idx = g.index_of(std::string(1, c));
        if (!idx) throw Error("unknown label in key '" + name + "'");
        e = e | Subset::singleton(*idx);
      }
    } else {
      std::size_t start = 0;
      for (std::size_t i = 0; i <= name.size(); ++i) {
        if (i < name.size() && name[i] != ',') continue;
        auto idx = g.index_of(name.substr(start, i - start));
        if (!idx) throw Error("unknown label in key '" + name + "'");
        e = e | Subset::singleton(*idx);
        start = i + 1;
      }
    }
    auto i = keys->index_of(e);
    if (!i) throw Error("'" + name + "' is not a canonical key of " + p.to_string());
    if (!value.is_string() || (value != "+" && value != "-")) throw Error("sign must be \"+\" or \"-\"");
    per_key[*i] = value.get<std::string>()[0];
  }
  std::string str(per_key.begin(), per_key.end());
  if (str.find('\0') != std::string::npos) throw ArityMismatch("shard lists fewer signs than canonical keys");
  return shard_from_sign_string(p, str);
}

std::pair<SpacePtr, std::vector<std::pair<std::size_t, Rational>>> values_from(const ojson& j, const GroundPtr* ground) {
  check_schema(j);
  auto space = ShardSpace::of(support_of(j, ground));
  const ojson& values = field(j, "values");
  if (!values.is_object()) throw Error("\"values\" must be an object");
  std::vector<std::pair<std::size_t, Rational>> out;
  for (const auto& [id, value] : values.items()) {
    auto idx = space->find(shard_from_sign_string(space->support(), id).signs());
    if (!idx) throw Error("'" + id + "' is not a shard of " + space->support().to_string());
    Rational q = value.is_string() ? parse_rational(value.get<std::string>())
                 : value.is_number_integer() ? Rational(value.get<long>())
                                             : throw Error("values must be rational strings");
    out.emplace_back(*idx, q);
  }
  return {space, out};
}

Functional functional_from(const ojson& j, const GroundPtr* ground) {
  auto [space, entries] = values_from(j, ground);
  std::vector<bool> seen(space->size(), false);
  std::vector<Rational> values(space->size(), 0);
  for (const auto& [i, q] : entries) {
    seen[i] = true;
    values[i] = q;
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ArityMismatch("functional has no value for shard " + space->shard(i).sign_string());
  }
  return Functional(space, std::move(values));
}

ShardVector vector_from(const ojson& j, const GroundPtr* ground) {
  auto [space, entries] = values_from(j, ground);
  ShardVector v(space);
  for (const auto& [i, q] : entries) v.add(i, q);
  return v;
}

}  // namespace

std::string shard_to_json(const Shard& x) {
  ojson signs = ojson::object();
  const KeySet& keys = x.keys();
  const GroundSet& g = x.support().ground();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    signs[format_subset(g, keys.key(i))] = keys.negative(x.signs(), i) ? "-" : "+";
  }
  ojson j = ojson::object();
  j["support"] = x.support().to_string();
  j["signs"] = std::move(signs);
  return j.dump();
}

Shard shard_from_json(std::string_view text) { return shard_from(parse_json(text), nullptr); }
Shard shard_from_json(std::string_view text, const GroundPtr& ground) { return shard_from(parse_json(text), &ground); }

std::string functional_to_json(const Functional& f) {
  ojson values = ojson::object();
  for (std::size_t i = 0; i < f.values().size(); ++i) values[f.space()->shard(i).sign_string()] = to_string(f[i]);
  ojson j = ojson::object();
  j["schema"] = kSchemaVersion;
  j["support"] = f.support().to_string();
  j["values"] = std::move(values);
  return j.dump(2);
}

std::string shard_vector_to_json(const ShardVector& v) {
  ojson values = ojson::object();
  for (const auto& [i, c] : v.coeffs().entries()) values[v.space()->shard(i).sign_string()] = to_string(c);
  ojson j = ojson::object();
  j["schema"] = kSchemaVersion;
  j["support"] = v.support().to_string();
  j["values"] = std::move(values);
  return j.dump(2);
}

Functional functional_from_json(std::string_view text) { return functional_from(parse_json(text), nullptr); }
Functional functional_from_json(std::string_view text, const GroundPtr& ground) {
  return functional_from(parse_json(text), &ground);
}
ShardVector shard_vector_from_json(std::string_view text) { return vector_from(parse_json(text), nullptr); }
ShardVector shard_vector_from_json(std::string_view text, const GroundPtr& ground) {
  return vector_from(parse_json(text), &ground);
}

std::string document_support(std::string_view text) { return string_field(parse_json(text), "support"); }

namespace {

ojson signed_list(const std::vector<std::pair<int, std::string>>& items) {
  ojson out = ojson::array();
  for (const auto& [s, text] : items) out.push_back(ojson::array({s, text}));
  return out;
}

std::vector<std::pair<int, std::string>> signed_list_from(const ojson& j) {
  std::vector<std::pair<int, std::string>> out;
  for (const auto& item : j) out.emplace_back(item.at(0).get<int>(), item.at(1).get<std::string>());
  return out;
}

ojson instance_json(const Instance& in) {
  ojson j = ojson::object();
  j["claim"] = in.claim;
  j["n"] = in.n;
  j["forests"] = signed_list(in.forests);
  j["shards"] = signed_list(in.shards);
  j["support"] = in.support;
  j["partition"] = in.partition;
  j["seed"] = in.seed;
  j["index"] = in.index;
  j["detail"] = in.detail;
  return j;
}

}  // namespace

std::string instance_to_json(const Instance& in) {
  ojson j = instance_json(in);
  j["schema"] = kSchemaVersion;
  return j.dump(2);
}

Instance instance_from_json(std::string_view text) {
  ojson j = parse_json(text);
  check_schema(j);
  if (j.contains("counterexample")) j = j.at("counterexample");
  try {
    Instance in;
    in.claim = j.at("claim").get<std::string>();
    in.n = j.at("n").get<int>();
    if (j.contains("forests")) in.forests = signed_list_from(j.at("forests"));
    if (j.contains("shards")) in.shards = signed_list_from(j.at("shards"));
    in.support = j.value("support", "");
    in.partition = j.value("partition", "");
    in.seed = j.value("seed", std::uint64_t{0});
    in.index = j.value("index", -1L);
    in.detail = j.value("detail", "");
    return in;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed instance: ") + e.what());
  }
}

std::string report_to_json(const AuditReport& r) {
  ojson entries = ojson::array();
  for (const auto& e : r.entries) {
    ojson j = ojson::object();
    j["claim"] = e.claim;
    j["statement"] = e.statement;
    j["n"] = e.n;
    j["instances"] = e.instances;
    j["sampled"] = e.sampled;
    j["pass"] = e.pass;
    j["counterexample"] = e.counterexample ? instance_json(*e.counterexample) : ojson(nullptr);
    entries.push_back(std::move(j));
  }
  ojson out = ojson::object();
  out["schema"] = kSchemaVersion;
  out["pass"] = r.pass();
  out["entries"] = std::move(entries);
  return out.dump(2);
}

std::string report_to_text(const AuditReport& r) {
  std::string out;
  for (const auto& e : r.entries) {
    out += e.pass ? "PASS " : "FAIL ";
    out += e.claim + " n=" + std::to_string(e.n) + " instances=" + std::to_string(e.instances);
    if (e.sampled) out += " (sampled)";
    out += "  " + e.statement + "\n";
    if (e.counterexample) out += "  counterexample: " + e.counterexample->detail + "\n";
  }
  out += r.pass() ? "verdict: pass\n" : "verdict: fail\n";
  return out;
}

}  // namespace adjbraid
