#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ora/core_model.hpp"

namespace ora {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {params:{...}, requests:[...]}. Menus are arrays of [reward, consumption]
// pairs, linear requests are {"a", "delta", "x_max"} objects. Doubles are
// written in shortest round-trip form so reloading is lossless.
Json params_to_json(const InstanceParams& p);
InstanceParams params_from_json(const Json& j);

Json request_to_json(const Request& r);
Request request_from_json(const Json& j);

Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

Json action_to_json(const Action& a);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Instance load_instance(const std::filesystem::path& path);

}  // namespace ora
