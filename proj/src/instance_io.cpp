#include "ora/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace ora {

Json params_to_json(const InstanceParams& p) {
  Json j;
  j["B"] = p.budget;
  j["T"] = p.horizon;
  j["rho"] = p.rho();
  j["f_bar"] = p.f_bar;
  j["b_bar"] = p.b_bar;
  j["b_low"] = p.b_low;
  j["lambda_max"] = p.lambda_max;
  j["u"] = p.u;
  j["l"] = p.l;
  j["epsilon"] = p.epsilon;
  j["density_bounds"] = p.density_bounds;
  return j;
}

namespace {

double number(const Json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing key: ") + key);
  const Json& v = j.at(key);
  if (!v.is_number()) throw FormatError(std::string("not a number: ") + key);
  return v.get<double>();
}

template <class T>
T number_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) throw FormatError(std::string("not a number: ") + key);
  return v.get<T>();
}

}  // namespace

InstanceParams params_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("params must be an object");
  InstanceParams p;
  p.horizon = static_cast<int>(number(j, "T"));
  if (j.contains("B")) {
    p.budget = number(j, "B");
  } else {
    p.budget = number(j, "rho") * p.horizon;
  }
  p.f_bar = number_or(j, "f_bar", p.f_bar);
  p.b_bar = number_or(j, "b_bar", p.b_bar);
  p.b_low = number_or(j, "b_low", p.b_low);
  p.lambda_max = j.contains("lambda_max") ? number(j, "lambda_max")
                                          : p.f_bar / p.rho();
  p.u = number_or(j, "u", p.u);
  p.l = number_or(j, "l", p.l);
  p.epsilon = number_or(j, "epsilon", p.epsilon);
  if (j.contains("density_bounds")) {
    if (!j.at("density_bounds").is_boolean())
      throw FormatError("density_bounds must be a boolean");
    p.density_bounds = j.at("density_bounds").get<bool>();
  }
  return p;
}

Json request_to_json(const Request& r) {
  if (const auto* lin = std::get_if<LinearThreshold>(&r)) {
    Json j;
    j["a"] = lin->a;
    j["delta"] = lin->delta;
    j["x_max"] = lin->x_max;
    return j;
  }
  Json arr = Json::array();
  for (const Action& a : std::get<FiniteMenu>(r).actions)
    arr.push_back(Json::array({a.reward, a.consumption}));
  return arr;
}

Request request_from_json(const Json& j) {
  if (j.is_object()) {
    LinearThreshold lin;
    lin.a = number(j, "a");
    lin.delta = number(j, "delta");
    lin.x_max = number_or(j, "x_max", 1.0);
    return lin;
  }
  if (!j.is_array()) throw FormatError("request must be an array or object");
  FiniteMenu menu;
  int id = 0;
  for (const Json& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number())
      throw FormatError("menu entries must be [reward, consumption] pairs");
    menu.actions.push_back(
        Action{id++, pair[0].get<double>(), pair[1].get<double>(), 0.0});
  }
  return menu;
}

Json instance_to_json(const Instance& instance) {
  Json j;
  Json params = params_to_json(instance.params);
  if (instance.quantum) params["quantum"] = *instance.quantum;
  j["params"] = std::move(params);
  Json reqs = Json::array();
  for (const Request& r : instance.requests) reqs.push_back(request_to_json(r));
  j["requests"] = std::move(reqs);
  return j;
}

Instance instance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("params") || !j.contains("requests"))
    throw FormatError("instance needs params and requests");
  Instance inst;
  inst.params = params_from_json(j.at("params"));
  if (j.at("params").contains("quantum"))
    inst.quantum = number(j.at("params"), "quantum");
  const Json& reqs = j.at("requests");
  if (!reqs.is_array()) throw FormatError("requests must be an array");
  for (const Json& r : reqs) inst.requests.push_back(request_from_json(r));
  return inst;
}

Json action_to_json(const Action& a) {
  Json j;
  j["id"] = a.id;
  j["reward"] = a.reward;
  j["consumption"] = a.consumption;
  j["amount"] = a.amount;
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

}  // namespace ora
