#include "geol/task_config.hpp"

#include <nlohmann/json.hpp>

namespace geol {

namespace {

using nlohmann::json;

class Collector {
 public:
  void add(const std::string& violation) { violations_.push_back(violation); }
  bool ok() const { return violations_.empty(); }
  void raise_if_any() {
    if (!violations_.empty()) throw ConfigError(std::move(violations_));
  }

 private:
  std::vector<std::string> violations_;
};

std::string strip_query_mark(std::string name) {
  if (!name.empty() && name.front() == '?') name.erase(name.begin());
  return name;
}

ResourceSpec parse_resource(const json& doc, const std::string& label, Collector& errors) {
  ResourceSpec spec;
  if (!doc.is_object()) {
    errors.add(label + ": must be an object");
    return spec;
  }

  auto string_field = [&](const char* field, bool required) -> std::string {
    if (!doc.contains(field)) {
      if (required) errors.add(label + "." + field + ": missing required field");
      return "";
    }
    if (!doc[field].is_string()) {
      errors.add(label + "." + field + ": must be a string");
      return "";
    }
    return doc[field].get<std::string>();
  };

  spec.endpoint = string_field("endpoint", true);
  if (!spec.endpoint.empty() && spec.endpoint.find("://") == std::string::npos)
    errors.add(label + ".endpoint: not a URL: " + spec.endpoint);
  spec.query = string_field("query", true);
  spec.id_var = strip_query_mark(string_field("id_var", true));
  spec.geo_var = strip_query_mark(string_field("geo_var", true));
  if (spec.id_var.empty() && doc.contains("id_var"))
    errors.add(label + ".id_var: must name a variable");
  if (spec.geo_var.empty() && doc.contains("geo_var"))
    errors.add(label + ".geo_var: must name a variable");
  if (!spec.query.empty()) {
    if (!spec.id_var.empty() && spec.query.find("?" + spec.id_var) == std::string::npos)
      errors.add(label + ".query: does not bind ?" + spec.id_var);
    if (!spec.geo_var.empty() && spec.query.find("?" + spec.geo_var) == std::string::npos)
      errors.add(label + ".query: does not bind ?" + spec.geo_var);
  }

  if (doc.contains("offset")) {
    if (!doc["offset"].is_number_integer() || doc["offset"].get<std::int64_t>() < 0) {
      errors.add(label + ".offset: must be a non-negative integer");
    } else {
      spec.offset = doc["offset"].get<std::int64_t>();
    }
  }
  if (doc.contains("limit")) {
    const auto& limit = doc["limit"];
    if (limit.is_string() && limit.get<std::string>() == "all") {
      spec.limit = std::nullopt;
    } else if (limit.is_number_integer() && limit.get<std::int64_t>() >= 1) {
      spec.limit = limit.get<std::int64_t>();
    } else {
      errors.add(label + ".limit: must be a positive integer or \"all\"");
    }
  }
  if (doc.contains("chunksize")) {
    if (!doc["chunksize"].is_number_integer() || doc["chunksize"].get<std::int64_t>() < 1) {
      errors.add(label + ".chunksize: must be a positive integer");
    } else {
      spec.chunksize = doc["chunksize"].get<std::int64_t>();
    }
  }
  if (spec.limit && spec.chunksize > *spec.limit)
    errors.add(label + ": chunksize (" + std::to_string(spec.chunksize) +
               ") must not exceed limit (" + std::to_string(*spec.limit) + ")");
  return spec;
}

}  // namespace

TaskConfig parse_config(const std::string& json_text) {
  Collector errors;
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) {
    errors.add("document is not valid JSON");
    errors.raise_if_any();
  }
  if (!doc.is_object()) {
    errors.add("document must be a JSON object");
    errors.raise_if_any();
  }

  TaskConfig config;
  if (doc.contains("source")) {
    config.task.source = parse_resource(doc["source"], "source", errors);
  } else {
    errors.add("source: missing required field");
  }
  if (doc.contains("target")) {
    config.task.target = parse_resource(doc["target"], "target", errors);
  } else {
    errors.add("target: missing required field");
  }

  if (!doc.contains("relation")) {
    errors.add("relation: missing required field");
  } else if (!doc["relation"].is_string()) {
    errors.add("relation: must be a string");
  } else {
    auto rel = parse_relation(doc["relation"].get<std::string>());
    if (!rel) {
      errors.add("relation: unknown relation \"" + doc["relation"].get<std::string>() + "\"");
    } else {
      config.task.relation = *rel;
    }
  }

  config.task.output = "inline";
  if (doc.contains("output")) {
    if (!doc["output"].is_string() || doc["output"].get<std::string>().empty()) {
      errors.add("output: must be a non-empty string (path or \"inline\")");
    } else {
      config.task.output = doc["output"].get<std::string>();
    }
  }
  if (doc.contains("cache_dir")) {
    if (!doc["cache_dir"].is_string() || doc["cache_dir"].get<std::string>().empty()) {
      errors.add("cache_dir: must be a non-empty string");
    } else {
      config.cache_dir = doc["cache_dir"].get<std::string>();
    }
  }

  errors.raise_if_any();
  return config;
}

std::string canonical_config(const TaskConfig& config) {
  auto resource = [](const ResourceSpec& spec) {
    json r;
    r["endpoint"] = spec.endpoint;
    r["query"] = CacheStore::normalize_query(spec.query);
    r["id_var"] = spec.id_var;
    r["geo_var"] = spec.geo_var;
    r["offset"] = spec.offset;
    r["limit"] = spec.limit ? json(*spec.limit) : json("all");
    r["chunksize"] = spec.chunksize;
    return r;
  };
  json doc;
  doc["source"] = resource(config.task.source);
  doc["target"] = resource(config.task.target);
  doc["relation"] = std::string(relation_name(config.task.relation));
  doc["output"] = config.task.output;
  doc["cache_dir"] = config.cache_dir ? json(*config.cache_dir) : json(nullptr);
  return doc.dump();
}

}  // namespace geol
