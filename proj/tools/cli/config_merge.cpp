#include "config_merge.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "cho/types.hpp"

namespace cho::cli {

namespace {

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw Error(ErrorCode::invalid_input, "config values must be numbers, strings, booleans or arrays of those");
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

}  // namespace

std::vector<std::string> merge_config_args(std::vector<std::string> args) {
  std::string path;
  for (auto it = args.begin(); it != args.end(); ++it) {
    if (*it == "--config") {
      if (std::next(it) == args.end()) throw Error(ErrorCode::invalid_input, "--config needs a file name");
      path = *std::next(it);
      args.erase(it, it + 2);
      break;
    }
    if (it->rfind("--config=", 0) == 0) {
      path = it->substr(9);
      args.erase(it);
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_input, "cannot open config file " + path);
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_input, "config file is not valid JSON: " + std::string(e.what()));
  }
  if (!config.is_object()) throw Error(ErrorCode::invalid_input, "config file must hold a JSON object");

  for (const auto& [key, value] : config.items()) {
    const std::string flag = "--" + key;
    if (has_flag(args, flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    if (value.is_array()) {
      for (const auto& v : value) args.push_back(scalar_text(v));
    } else {
      args.push_back(scalar_text(value));
    }
  }
  return args;
}

}  // namespace cho::cli
