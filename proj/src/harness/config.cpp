/*
 * Copyright 2026 The lanfl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lanfl/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace lanfl::harness {

namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Reads fields of one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(label() + ": expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(obj_.contains(key) ? obj_.at(key) : empty, join(path_, key));
  }

  int get_int(const std::string& key, int def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
    const auto x = v->get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
      throw ConfigError(field(key) + ": integer out of range");
    }
    return static_cast<int>(x);
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_number_unsigned()) throw ConfigError(field(key) + ": expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  double get_double(const std::string& key, double def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_number()) throw ConfigError(field(key) + ": expected a number");
    return v->get<double>();
  }

  bool get_bool(const std::string& key, bool def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_boolean()) throw ConfigError(field(key) + ": expected true or false");
    return v->get<bool>();
  }

  std::string get_string(const std::string& key, const std::string& def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
    return v->get<std::string>();
  }

  /// A number or a non-empty array of numbers.
  std::vector<double> get_list(const std::string& key, std::vector<double> def) {
    const auto* v = find(key);
    if (v == nullptr) return def;
    if (v->is_number()) return {v->get<double>()};
    if (!v->is_array() || v->empty()) throw ConfigError(field(key) + ": expected a number or array of numbers");
    std::vector<double> out;
    for (const auto& e : *v) {
      if (!e.is_number()) throw ConfigError(field(key) + ": expected a number or array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::string field(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(field(key) + ": unknown key");
    }
  }

 private:
  std::string label() const { return path_.empty() ? "config" : path_; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

std::pair<int, int> line_and_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void validate(const RunConfig& c) {
  const auto& w = c.world;
  const auto& p = c.params;
  const auto& d = c.dataset;
  require(w.num_lans >= 1, "world.num_lans", "must be >= 1");
  require(w.devices_per_lan >= 1, "world.devices_per_lan", "must be >= 1");
  require(w.aps_per_lan >= 1, "world.aps_per_lan", "must be >= 1");
  const auto check_list = [&](const std::vector<double>& v, const std::string& name) {
    require(v.size() == 1 || static_cast<int>(v.size()) == w.num_lans, name,
            "needs 1 or world.num_lans entries");
    require(std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; }), name,
            "entries must be positive");
  };
  check_list(w.lan_bandwidth_mbps, "world.lan_bandwidth_mbps");
  check_list(w.ap_capacity_mbps, "world.ap_capacity_mbps");
  require(w.epoch_compute_time_s >= 0.0, "world.epoch_compute_time_s", "must be >= 0");

  const int n_devices = w.num_lans * w.devices_per_lan;
  require(p.cloud_rounds >= 1, "protocol_params.cloud_rounds", "must be >= 1");
  require(p.wan_mbps > 0.0, "protocol_params.wan_mbps", "must be positive");
  if (c.protocol == Protocol::kWanFl) {
    require(p.devices_per_round >= 1 && p.devices_per_round <= n_devices,
            "protocol_params.devices_per_round", "must be in [1, num_lans * devices_per_lan]");
  } else {
    require(p.device_rounds >= 1, "protocol_params.device_rounds", "must be >= 1");
    require(p.lans_per_round >= 1 && p.lans_per_round <= w.num_lans, "protocol_params.lans_per_round",
            "must be in [1, world.num_lans]");
    require(p.lan_devices_per_round >= 2, "protocol_params.lan_devices_per_round", "must be >= 2");
    require(w.devices_per_lan >= 2, "world.devices_per_lan", "LanFL needs >= 2 devices per LAN");
    require(p.heterogeneity_balancing || p.lan_devices_per_round <= w.devices_per_lan,
            "protocol_params.lan_devices_per_round", "exceeds world.devices_per_lan");
  }

  require(p.train.local_epochs >= 1, "train.local_epochs", "must be >= 1");
  require(p.train.batch_size >= 1, "train.batch_size", "must be >= 1");
  require(p.train.learning_rate >= 0.0, "train.learning_rate", "must be >= 0");

  require(c.model.hidden_units >= 1, "model.hidden_units", "must be >= 1");
  require(d.num_classes >= 2, "dataset.num_classes", "must be >= 2");
  require(d.num_features >= 1, "dataset.num_features", "must be >= 1");
  require(d.samples_per_device >= 1, "dataset.samples_per_device", "must be >= 1");
  require(d.shards_per_device >= 1 && d.shards_per_device <= d.samples_per_device,
          "dataset.shards_per_device", "must be in [1, samples_per_device]");
  require(d.train_fraction > 0.0 && d.train_fraction <= 1.0, "dataset.train_fraction", "must be in (0, 1]");
  require(d.noise >= 0.0, "dataset.noise", "must be >= 0");
  require(c.cost.hourly_rate >= 0.0, "cost.hourly_rate", "must be >= 0");
  require(c.cost.per_gb_downlink >= 0.0, "cost.per_gb_downlink", "must be >= 0");
  require(c.cost.per_gb_uplink >= 0.0, "cost.per_gb_uplink", "must be >= 0");
}

}  // namespace

std::string protocol_name(Protocol p) { return p == Protocol::kWanFl ? "wanfl" : "lanfl"; }

RunConfig parse_config(std::string_view text) {
  json root;
  if (std::all_of(text.begin(), text.end(), [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); })) {
    root = json::object();
  } else {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      const auto [line, col] = line_and_column(text, e.byte);
      throw ConfigError("parse error at line " + std::to_string(line) + ", column " +
                        std::to_string(col) + ": " + e.what());
    }
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  std::vector<std::string> missing;
  if (!root.contains("protocol")) missing.push_back("protocol");
  if (!root.contains("protocol_params") || !root["protocol_params"].is_object() ||
      !root["protocol_params"].contains("cloud_rounds")) {
    missing.push_back("protocol_params.cloud_rounds");
  }
  if (!missing.empty()) {
    std::string msg = "missing required fields:";
    for (const auto& m : missing) msg += " " + m;
    throw ConfigError(msg);
  }

  RunConfig c;
  Section top(root, "");
  const auto protocol = top.get_string("protocol", "");
  if (protocol == "wanfl") {
    c.protocol = Protocol::kWanFl;
  } else if (protocol == "lanfl") {
    c.protocol = Protocol::kLanFl;
  } else {
    throw ConfigError("protocol: expected \"wanfl\" or \"lanfl\"");
  }
  c.seed = top.get_u64("seed", c.seed);
  c.output_dir = top.get_string("output_dir", c.output_dir);

  {
    auto s = top.child("world");
    auto& w = c.world;
    w.num_lans = s.get_int("num_lans", w.num_lans);
    w.devices_per_lan = s.get_int("devices_per_lan", w.devices_per_lan);
    w.aps_per_lan = s.get_int("aps_per_lan", w.aps_per_lan);
    const auto mode = s.get_string("bandwidth_mode", w.fixed_bl ? "fixed_bl" : "capacity");
    if (mode != "fixed_bl" && mode != "capacity") {
      throw ConfigError(s.field("bandwidth_mode") + ": expected \"fixed_bl\" or \"capacity\"");
    }
    w.fixed_bl = mode == "fixed_bl";
    w.lan_bandwidth_mbps = s.get_list("lan_bandwidth_mbps", w.lan_bandwidth_mbps);
    w.ap_capacity_mbps = s.get_list("ap_capacity_mbps", w.ap_capacity_mbps);
    w.ap_backhaul_mbps = s.get_double("ap_backhaul_mbps", w.ap_backhaul_mbps);
    w.epoch_compute_time_s = s.get_double("epoch_compute_time_s", w.epoch_compute_time_s);
    s.finish();
  }
  {
    auto s = top.child("protocol_params");
    auto& p = c.params;
    p.cloud_rounds = s.get_int("cloud_rounds", p.cloud_rounds);
    p.device_rounds = s.get_int("device_rounds", p.device_rounds);
    p.lans_per_round = s.get_int("lans_per_round", p.lans_per_round);
    p.lan_devices_per_round = s.get_int("lan_devices_per_round", p.lan_devices_per_round);
    p.devices_per_round = s.get_int("devices_per_round", p.devices_per_round);
    p.wan_mbps = s.get_double("wan_mbps", p.wan_mbps);
    p.heterogeneity_balancing = s.get_bool("heterogeneity_balancing", p.heterogeneity_balancing);
    const auto weighting = s.get_string(
        "cloud_weighting", p.cloud_weighting == orchestrator::CloudWeighting::kLanTotal ? "lan_total" : "participants");
    if (weighting != "participants" && weighting != "lan_total") {
      throw ConfigError(s.field("cloud_weighting") + ": expected \"participants\" or \"lan_total\"");
    }
    p.cloud_weighting = weighting == "lan_total" ? orchestrator::CloudWeighting::kLanTotal
                                                 : orchestrator::CloudWeighting::kParticipants;
    s.finish();
  }
  {
    auto s = top.child("train");
    auto& t = c.params.train;
    t.local_epochs = s.get_int("local_epochs", t.local_epochs);
    t.batch_size = s.get_int("batch_size", t.batch_size);
    t.learning_rate = s.get_double("learning_rate", t.learning_rate);
    t.weighted_aggregation = s.get_bool("weighted_aggregation", t.weighted_aggregation);
    s.finish();
  }
  {
    auto s = top.child("model");
    auto& m = c.model;
    const auto kind = s.get_string("kind", m.kind == ModelKind::kLogistic ? "logistic" : "mlp");
    if (kind != "logistic" && kind != "mlp") throw ConfigError(s.field("kind") + ": expected \"logistic\" or \"mlp\"");
    m.kind = kind == "logistic" ? ModelKind::kLogistic : ModelKind::kMlp;
    m.hidden_units = s.get_int("hidden_units", m.hidden_units);
    m.wire_bytes = s.get_u64("wire_bytes", m.wire_bytes);
    s.finish();
  }
  {
    auto s = top.child("dataset");
    auto& d = c.dataset;
    const auto mode = s.get_string("mode", d.accounting_only ? "accounting_only" : "synthetic");
    if (mode != "synthetic" && mode != "accounting_only") {
      throw ConfigError(s.field("mode") + ": expected \"synthetic\" or \"accounting_only\"");
    }
    d.accounting_only = mode == "accounting_only";
    d.num_classes = s.get_int("num_classes", d.num_classes);
    d.num_features = s.get_int("num_features", d.num_features);
    d.samples_per_device = s.get_int("samples_per_device", d.samples_per_device);
    d.shards_per_device = s.get_int("shards_per_device", d.shards_per_device);
    d.class_separation = s.get_double("class_separation", d.class_separation);
    d.noise = s.get_double("noise", d.noise);
    d.train_fraction = s.get_double("train_fraction", d.train_fraction);
    s.finish();
  }
  {
    auto s = top.child("cost");
    auto& cm = c.cost;
    cm.hourly_rate = s.get_double("hourly_rate", cm.hourly_rate);
    cm.per_gb_downlink = s.get_double("per_gb_downlink", cm.per_gb_downlink);
    cm.per_gb_uplink = s.get_double("per_gb_uplink", cm.per_gb_uplink);
    s.finish();
  }
  top.finish();

  c.params.seed = c.seed;
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["protocol"] = protocol_name(c.protocol);
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  const auto& w = c.world;
  j["world"] = {{"num_lans", w.num_lans},
                {"devices_per_lan", w.devices_per_lan},
                {"aps_per_lan", w.aps_per_lan},
                {"bandwidth_mode", w.fixed_bl ? "fixed_bl" : "capacity"},
                {"lan_bandwidth_mbps", w.lan_bandwidth_mbps},
                {"ap_capacity_mbps", w.ap_capacity_mbps},
                {"ap_backhaul_mbps", w.ap_backhaul_mbps},
                {"epoch_compute_time_s", w.epoch_compute_time_s}};
  const auto& p = c.params;
  j["protocol_params"] = {{"cloud_rounds", p.cloud_rounds},
                          {"device_rounds", p.device_rounds},
                          {"lans_per_round", p.lans_per_round},
                          {"lan_devices_per_round", p.lan_devices_per_round},
                          {"devices_per_round", p.devices_per_round},
                          {"wan_mbps", p.wan_mbps},
                          {"heterogeneity_balancing", p.heterogeneity_balancing},
                          {"cloud_weighting",
                           p.cloud_weighting == orchestrator::CloudWeighting::kLanTotal ? "lan_total" : "participants"}};
  j["train"] = {{"local_epochs", p.train.local_epochs},
                {"batch_size", p.train.batch_size},
                {"learning_rate", p.train.learning_rate},
                {"weighted_aggregation", p.train.weighted_aggregation}};
  j["model"] = {{"kind", c.model.kind == ModelKind::kLogistic ? "logistic" : "mlp"},
                {"hidden_units", c.model.hidden_units},
                {"wire_bytes", c.model.wire_bytes}};
  const auto& d = c.dataset;
  j["dataset"] = {{"mode", d.accounting_only ? "accounting_only" : "synthetic"},
                  {"num_classes", d.num_classes},
                  {"num_features", d.num_features},
                  {"samples_per_device", d.samples_per_device},
                  {"shards_per_device", d.shards_per_device},
                  {"class_separation", d.class_separation},
                  {"noise", d.noise},
                  {"train_fraction", d.train_fraction}};
  j["cost"] = {{"hourly_rate", c.cost.hourly_rate},
               {"per_gb_downlink", c.cost.per_gb_downlink},
               {"per_gb_uplink", c.cost.per_gb_uplink}};
  return j;
}

std::string dump_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

}  // namespace lanfl::harness
