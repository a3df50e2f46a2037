/*
 * Copyright 2026 The faithmask Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAITHMASK_IO_HPP_
#define FAITHMASK_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "faithmask/core.hpp"
#include "faithmask/dataset.hpp"
#include "faithmask/feature_domains.hpp"
#include "faithmask/metrics.hpp"
#include "faithmask/model.hpp"
#include "faithmask/tasks.hpp"
#include "faithmask/tensor.hpp"

namespace faithmask {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kRunSchemaVersion = 1;

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// Reads a JSON document. Syntax errors become ConfigError carrying the line
// and column.
Json parse_json_text(const std::string& text, const std::string& source);
Json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
// Writes through a temporary file in the same directory and renames it.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);

// Named-field accessors for configuration documents. `where` prefixes the
// diagnostic, e.g. "experiments[0].task".
const Json& require_field(const Json& obj, const std::string& key, const std::string& where);
template <typename T>
T field_or(const Json& obj, const std::string& key, const T& fallback, const std::string& where);
template <typename T>
T field(const Json& obj, const std::string& key, const std::string& where);

Json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const Json& j);

// {"format": "faithmask-model", "version": 1, "input": [rows, cols],
//  "layers": [{"type": "dense", "shape": [out, in], "weight": [...], ...}]}
Json model_to_json(const Model& model);
Model model_from_json(const Json& j);
void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

// "index,value" with one row per feature, row-major.
std::string saliency_csv(const Signal& saliency);
Json subset_to_json(const FeatureSubset& subset);

Json task_spec_to_json(const TaskSpec& spec);
TaskSpec task_spec_from_json(const Json& j, const std::string& where = "task");

// CSV "y,x0,x1,..." with one row per flattened sample, plus a JSON sidecar
// holding the task spec and the sample shape.
void save_dataset(const std::filesystem::path& csv_path, const Dataset& data, const TaskSpec& spec);
Dataset load_dataset(const std::filesystem::path& csv_path);
std::filesystem::path dataset_sidecar(const std::filesystem::path& csv_path);

// "ratio,acc_morf,acc_lerf", one row per ratio.
std::string curve_csv(const DegradationCurve& curve);
// Fills ratios, acc_morf and acc_lerf.
DegradationCurve parse_curve_csv(const std::string& text, const std::string& source);

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

template <typename T>
T field(const Json& obj, const std::string& key, const std::string& where) {
  const Json& v = require_field(obj, key, where);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + ": unexpected value " + v.dump());
  }
}

template <typename T>
T field_or(const Json& obj, const std::string& key, const T& fallback, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  if (!obj.contains(key)) return fallback;
  return field<T>(obj, key, where);
}

}  // namespace faithmask

#endif  // FAITHMASK_IO_HPP_
