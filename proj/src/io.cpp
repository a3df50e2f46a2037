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

#include "faithmask/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace faithmask {
namespace fs = std::filesystem;

namespace {

template <typename Derived>
Json values_of(const Eigen::PlainObjectBase<Derived>& m) {
  Json a = Json::array();
  for (Index i = 0; i < m.size(); ++i) a.push_back(m.data()[i]);
  return a;
}

Vector vector_from(const Json& a, Index expected, const std::string& where) {
  if (!a.is_array() || static_cast<Index>(a.size()) != expected) {
    throw ConfigError(where + ": expected " + std::to_string(expected) + " values");
  }
  Vector v(expected);
  for (Index i = 0; i < expected; ++i) {
    const Json& e = a[static_cast<std::size_t>(i)];
    if (!e.is_number()) throw ConfigError(where + ": non-numeric value");
    v(i) = e.get<double>();
  }
  return v;
}

Signal signal_from(const Json& a, Index rows, Index cols, const std::string& where) {
  const Vector v = vector_from(a, rows * cols, where);
  return Eigen::Map<const Signal>(v.data(), rows, cols);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(where + ": cannot parse number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf.data(), ptr);
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": invalid JSON (" + e.what() + ")");
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const fs::path& path) { return parse_json_text(read_text(path), path.string()); }

void write_text_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const Json& doc) { write_text_atomic(path, doc.dump(2) + "\n"); }

const Json& require_field(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + "." + key + ": missing required field");
  return *it;
}

Json tensor_to_json(const Tensor& t) {
  Json j;
  j["shape"] = t.shape;
  j["data"] = values_of(t.data);
  return j;
}

Tensor tensor_from_json(const Json& j) {
  const auto shape = field<std::vector<Index>>(j, "shape", "tensor");
  Index n = 1;
  for (Index d : shape) n *= d;
  return Tensor(shape, vector_from(require_field(j, "data", "tensor"), n, "tensor.data"));
}

Json model_to_json(const Model& model) {
  Json j;
  j["format"] = "faithmask-model";
  j["version"] = kModelFormatVersion;
  j["input"] = {model.input_rows(), model.input_cols()};
  j["num_classes"] = model.num_classes();
  Json layers = Json::array();
  for (const Layer& layer : model.layers()) {
    Json l;
    std::visit(Overloaded{
                   [&](const DenseLayer& d) {
                     l["type"] = "dense";
                     l["shape"] = {d.weight.rows(), d.weight.cols()};
                     l["weight"] = values_of(d.weight);
                     l["bias"] = values_of(d.bias);
                   },
                   [&](const Conv1dLayer& c) {
                     l["type"] = "conv1d";
                     l["filters"] = c.weight.rows();
                     l["in_channels"] = c.in_channels;
                     l["kernel"] = c.kernel;
                     l["weight"] = values_of(c.weight);
                     l["bias"] = values_of(c.bias);
                   },
                   [&](const ReluLayer&) { l["type"] = "relu"; },
                   [&](const TanhLayer&) { l["type"] = "tanh"; },
                   [&](const MeanPoolLayer&) { l["type"] = "meanpool"; },
               },
               layer);
    layers.push_back(std::move(l));
  }
  j["layers"] = std::move(layers);
  if (model.train_accuracy) j["train_accuracy"] = *model.train_accuracy;
  return j;
}

Model model_from_json(const Json& j) {
  if (field<std::string>(j, "format", "model") != "faithmask-model") {
    throw ConfigError("model.format: not a faithmask model document");
  }
  const int version = field<int>(j, "version", "model");
  if (version != kModelFormatVersion) {
    throw ConfigError("model.version: unsupported version " + std::to_string(version));
  }
  const auto input = field<std::vector<Index>>(j, "input", "model");
  if (input.size() != 2) throw ConfigError("model.input: expected [rows, cols]");
  const Json& arr = require_field(j, "layers", "model");
  if (!arr.is_array()) throw ConfigError("model.layers: expected an array");
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "model.layers[" + std::to_string(i) + "]";
    const Json& l = arr[i];
    const auto type = field<std::string>(l, "type", where);
    if (type == "dense") {
      const auto shape = field<std::vector<Index>>(l, "shape", where);
      if (shape.size() != 2) throw ConfigError(where + ".shape: expected [out, in]");
      layers.emplace_back(DenseLayer{signal_from(require_field(l, "weight", where), shape[0], shape[1], where + ".weight"),
                                     vector_from(require_field(l, "bias", where), shape[0], where + ".bias")});
    } else if (type == "conv1d") {
      const auto filters = field<Index>(l, "filters", where);
      Conv1dLayer c;
      c.in_channels = field<Index>(l, "in_channels", where);
      c.kernel = field<Index>(l, "kernel", where);
      c.weight = signal_from(require_field(l, "weight", where), filters, c.in_channels * c.kernel, where + ".weight");
      c.bias = vector_from(require_field(l, "bias", where), filters, where + ".bias");
      layers.emplace_back(std::move(c));
    } else if (type == "relu") {
      layers.emplace_back(ReluLayer{});
    } else if (type == "tanh") {
      layers.emplace_back(TanhLayer{});
    } else if (type == "meanpool") {
      layers.emplace_back(MeanPoolLayer{});
    } else {
      throw ConfigError(where + ".type: unknown layer type '" + type + "'");
    }
  }
  Model m(input[0], input[1], std::move(layers));
  if (j.contains("train_accuracy")) m.train_accuracy = field<double>(j, "train_accuracy", "model");
  return m;
}

void save_model(const fs::path& path, const Model& model) { write_json(path, model_to_json(model)); }

Model load_model(const fs::path& path) { return model_from_json(read_json(path)); }

std::string saliency_csv(const Signal& saliency) {
  std::string out = "index,value\n";
  for (Index i = 0; i < saliency.size(); ++i) {
    out += std::to_string(i) + "," + format_double(saliency.data()[i]) + "\n";
  }
  return out;
}

Json subset_to_json(const FeatureSubset& subset) {
  Json j;
  j["domain"] = domain_name(subset.domain);
  j["indices"] = subset.indices;
  j["ratio"] = subset.ratio;
  return j;
}

Json task_spec_to_json(const TaskSpec& spec) {
  Json j;
  j["kind"] = task_name(spec.kind);
  j["channels"] = spec.channels;
  j["time"] = spec.time;
  j["montage_rows"] = spec.montage_rows;
  j["montage_cols"] = spec.montage_cols;
  j["classes"] = spec.classes;
  j["informative_channels"] = spec.informative_channels;
  j["window_begin"] = spec.window_begin;
  j["window_end"] = spec.window_end;
  j["class_frequencies"] = spec.class_frequencies;
  j["patch_size"] = spec.patch_size;
  j["sampling_rate"] = spec.sampling_rate;
  j["signal_amplitude"] = spec.signal_amplitude;
  j["noise_std"] = spec.noise_std;
  j["samples_per_class"] = spec.samples_per_class;
  j["seed"] = spec.seed;
  return j;
}

TaskSpec task_spec_from_json(const Json& j, const std::string& where) {
  const auto kind_name = field<std::string>(j, "kind", where);
  TaskSpec s;
  try {
    s = shipped_task(parse_task(kind_name));
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ".kind: " + e.what());
  }
  static const std::vector<std::string> known = {
      "kind", "channels", "time", "montage_rows", "montage_cols", "classes", "informative_channels",
      "window_begin", "window_end", "class_frequencies", "patch_size", "sampling_rate",
      "signal_amplitude", "noise_std", "samples_per_class", "seed"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(where + "." + key + ": unknown field");
    }
  }
  s.channels = field_or(j, "channels", s.channels, where);
  s.time = field_or(j, "time", s.time, where);
  s.montage_rows = field_or(j, "montage_rows", s.montage_rows, where);
  s.montage_cols = field_or(j, "montage_cols", s.montage_cols, where);
  s.classes = field_or(j, "classes", s.classes, where);
  s.informative_channels = field_or(j, "informative_channels", s.informative_channels, where);
  s.window_begin = field_or(j, "window_begin", s.window_begin, where);
  s.window_end = field_or(j, "window_end", s.window_end, where);
  s.class_frequencies = field_or(j, "class_frequencies", s.class_frequencies, where);
  s.patch_size = field_or(j, "patch_size", s.patch_size, where);
  s.sampling_rate = field_or(j, "sampling_rate", s.sampling_rate, where);
  s.signal_amplitude = field_or(j, "signal_amplitude", s.signal_amplitude, where);
  s.noise_std = field_or(j, "noise_std", s.noise_std, where);
  s.samples_per_class = field_or(j, "samples_per_class", s.samples_per_class, where);
  s.seed = field_or(j, "seed", s.seed, where);
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

fs::path dataset_sidecar(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

void save_dataset(const fs::path& csv_path, const Dataset& data, const TaskSpec& spec) {
  if (data.empty()) throw InvalidArgument("cannot save an empty dataset");
  const Index n = data.samples.front().x.size();
  std::string out = "y";
  for (Index i = 0; i < n; ++i) out += ",x" + std::to_string(i);
  out += "\n";
  for (const Sample& s : data.samples) {
    out += std::to_string(s.y);
    for (Index i = 0; i < n; ++i) out += "," + format_double(s.x.data()[i]);
    out += "\n";
  }
  write_text_atomic(csv_path, out);
  Json side;
  side["schema_version"] = kRunSchemaVersion;
  side["rows"] = data.rows();
  side["cols"] = data.cols();
  side["num_classes"] = data.num_classes;
  side["layout"] = data.layout == Layout::kGrid ? "grid" : "channels_time";
  side["sampling_rate"] = data.sampling_rate;
  side["montage"] = {data.montage_rows, data.montage_cols};
  side["task"] = task_spec_to_json(spec);
  write_json(dataset_sidecar(csv_path), side);
}

Dataset load_dataset(const fs::path& csv_path) {
  const Json side = read_json(dataset_sidecar(csv_path));
  const std::string where = dataset_sidecar(csv_path).string();
  Dataset d;
  const auto rows = field<Index>(side, "rows", where);
  const auto cols = field<Index>(side, "cols", where);
  d.num_classes = field<Index>(side, "num_classes", where);
  d.layout = field<std::string>(side, "layout", where) == "grid" ? Layout::kGrid : Layout::kChannelsTime;
  d.sampling_rate = field<double>(side, "sampling_rate", where);
  const auto montage = field<std::vector<Index>>(side, "montage", where);
  if (montage.size() != 2) throw ConfigError(where + ".montage: expected [rows, cols]");
  d.montage_rows = montage[0];
  d.montage_cols = montage[1];
  std::istringstream in(read_text(csv_path));
  std::string line;
  std::getline(in, line);
  Index lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    const std::string loc = csv_path.string() + ":" + std::to_string(lineno);
    if (static_cast<Index>(cells.size()) != rows * cols + 1) throw ConfigError(loc + ": wrong column count");
    Sample s;
    s.y = static_cast<Index>(parse_double(cells[0], loc));
    if (s.y < 0 || s.y >= d.num_classes) throw ConfigError(loc + ": label out of range");
    s.x.resize(rows, cols);
    for (Index i = 0; i < rows * cols; ++i) s.x.data()[i] = parse_double(cells[static_cast<std::size_t>(i + 1)], loc);
    d.samples.push_back(std::move(s));
  }
  return d;
}

std::string curve_csv(const DegradationCurve& curve) {
  curve.validate();
  std::string out = "ratio,acc_morf,acc_lerf\n";
  for (std::size_t k = 0; k < curve.ratios.size(); ++k) {
    out += format_double(curve.ratios[k]) + "," + format_double(curve.acc_morf[k]) + "," +
           format_double(curve.acc_lerf[k]) + "\n";
  }
  return out;
}

DegradationCurve parse_curve_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "ratio,acc_morf,acc_lerf") {
    throw ConfigError(source + ":1: expected header ratio,acc_morf,acc_lerf");
  }
  DegradationCurve c;
  Index lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    const std::string loc = source + ":" + std::to_string(lineno);
    if (cells.size() != 3) throw ConfigError(loc + ": expected 3 columns");
    c.ratios.push_back(parse_double(cells[0], loc));
    c.acc_morf.push_back(parse_double(cells[1], loc));
    c.acc_lerf.push_back(parse_double(cells[2], loc));
  }
  return c;
}

std::string sha256_file(const fs::path& path) {
  const std::string bytes = read_text(path);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw Error("SHA-256 failed for " + path.string());
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

}  // namespace faithmask
