#pragma once

#include "railnet/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace railnet {

// Malformed document: bad JSON, wrong types, missing or unknown keys.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& instance);

Solution solution_from_json(const nlohmann::json& doc);
nlohmann::json solution_to_json(const Solution& solution);

// Rationals are written as JSON integers when integral, otherwise as "p/q".
nlohmann::json rational_to_json(const Rational& value);
Rational rational_from_json(const nlohmann::json& value, const std::string& where);

Instance load_instance(const std::filesystem::path& path);
Solution load_solution(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);
void save_solution(const Solution& solution, const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace railnet
