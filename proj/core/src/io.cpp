#include "pbdstein/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pbdstein/errors.hpp"

namespace pbdstein {

namespace {

using json = nlohmann::json;  // std::map-backed objects, so keys serialize sorted

json meta_to_json(const PmfMeta& meta) {
  json j;
  j["source"] = meta.source;
  j["tol"] = meta.tol;
  j["renormalized"] = meta.renormalized;
  j["params"] = json(meta.params);
  j["notes"] = json(meta.notes);
  return j;
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw domain_error("malformed JSON document");
  return j;
}

void require_schema(const json& j, const char* kind) {
  if (!j.is_object() || j.value("schema", std::string()) != kSchemaTag)
    throw domain_error("document does not carry the expected schema tag");
  if (j.value("kind", std::string()) != kind)
    throw domain_error(std::string("document is not of kind \"") + kind + "\"");
}

}  // namespace

std::string to_json(const TruncatedPmf& pmf, int indent) {
  json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "pmf";
  j["offset"] = pmf.offset;
  j["probs"] = json(pmf.probs);
  j["tail_bound"] = pmf.tail_bound;
  j["meta"] = meta_to_json(pmf.meta);
  return j.dump(indent);
}

std::string to_json(const BoundReport& report, int indent) {
  json entries = json::object();
  for (const auto& [id, entry] : report) {
    json e;
    if (entry.applicable()) {
      e["value"] = *entry.value;
    } else {
      e["value"] = nullptr;
      e["reason"] = entry.reason;
    }
    entries[id] = std::move(e);
  }
  json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "bounds";
  j["bounds"] = std::move(entries);
  return j.dump(indent);
}

std::string to_json(const DistanceResult& d, int indent) {
  json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "distance";
  j["method"] = d.method;
  j["value"] = d.value;
  j["tail_error"] = d.tail_error;
  return j.dump(indent);
}

std::string to_json(const CouplingEstimate& e, int indent) {
  json j;
  j["schema"] = kSchemaTag;
  j["kind"] = "estimate";
  j["target"] = e.target;
  j["mean"] = e.mean;
  j["std_error"] = e.std_error;
  j["n_samples"] = e.n_samples;
  j["seed"] = e.seed;
  return j.dump(indent);
}

TruncatedPmf pmf_from_json(const std::string& text) {
  const json j = parse(text);
  require_schema(j, "pmf");
  if (!j.contains("probs") || !j["probs"].is_array() || j["probs"].empty())
    throw domain_error("pmf document needs a non-empty probs array");

  TruncatedPmf pmf;
  pmf.offset = j.value("offset", std::int64_t{0});
  if (pmf.offset < 0) throw domain_error("offset must be non-negative");
  pmf.tail_bound = j.value("tail_bound", 0.0);
  if (!(pmf.tail_bound >= 0.0)) throw domain_error("tail_bound must be non-negative");
  for (const auto& v : j["probs"]) {
    if (!v.is_number()) throw domain_error("probs entries must be numbers");
    const double p = v.get<double>();
    if (!(p >= 0.0) || p > 1.0 + 1e-12)
      throw domain_error("probs entries must lie in [0, 1]");
    pmf.probs.push_back(p);
  }
  if (j.contains("meta") && j["meta"].is_object()) {
    const json& m = j["meta"];
    pmf.meta.source = m.value("source", std::string());
    pmf.meta.tol = m.value("tol", 0.0);
    pmf.meta.renormalized = m.value("renormalized", false);
    if (m.contains("params"))
      pmf.meta.params = m["params"].get<std::map<std::string, double>>();
    if (m.contains("notes"))
      pmf.meta.notes = m["notes"].get<std::vector<std::string>>();
  }
  return pmf;
}

void write_csv(std::ostream& out, const TruncatedPmf& pmf) {
  out << "k,prob\n";
  for (std::size_t i = 0; i < pmf.probs.size(); ++i)
    out << (pmf.offset + static_cast<std::int64_t>(i)) << ','
        << format_double(pmf.probs[i]) << '\n';
}

void write_csv(std::ostream& out, const BoundReport& report) {
  out << "bound_id,value\n";
  for (const auto& [id, entry] : report)
    out << id << ','
        << (entry.applicable() ? format_double(*entry.value) : std::string("null"))
        << '\n';
}

void write_csv(std::ostream& out, const std::vector<PathPoint>& path) {
  out << "time,state\n";
  for (const PathPoint& p : path)
    out << format_double(p.time) << ',' << p.state << '\n';
}

BernoulliProfile profile_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("p") || !j["p"].is_array())
    throw domain_error("profile document needs a \"p\" array");
  std::vector<double> p;
  for (const auto& v : j["p"]) {
    if (!v.is_number()) throw domain_error("profile entries must be numbers");
    p.push_back(v.get<double>());
  }
  return BernoulliProfile(std::move(p));
}

BernoulliProfile profile_from_csv(const std::string& text) {
  std::vector<double> p;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(a, b - a + 1);
    if (line_no == 1 && tok == "p") continue;  // optional header
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      p.push_back(v);
    } catch (const std::exception&) {
      throw domain_error("profile line " + std::to_string(line_no) +
                         " is not a probability: " + tok);
    }
  }
  return BernoulliProfile(std::move(p));
}

BernoulliProfile load_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw domain_error("cannot open profile file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  bool as_json;
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    as_json = true;
  } else if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    as_json = false;
  } else {
    std::size_t k = text.find_first_not_of(" \t\r\n");
    as_json = (k != std::string::npos && text[k] == '{');
  }
  return as_json ? profile_from_json(text) : profile_from_csv(text);
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace pbdstein
