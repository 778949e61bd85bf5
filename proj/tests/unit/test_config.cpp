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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lanfl/harness/config.hpp"

namespace lanfl::harness {
namespace {

constexpr const char* kMinimal = R"({"protocol": "lanfl", "protocol_params": {"cloud_rounds": 5}})";

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, EmptyFileListsRequiredFields) {
  for (const char* text : {"", "  \n", "{}"}) {
    const auto msg = error_of(text);
    EXPECT_NE(msg.find("missing required fields"), std::string::npos) << msg;
    EXPECT_NE(msg.find("protocol"), std::string::npos);
    EXPECT_NE(msg.find("protocol_params.cloud_rounds"), std::string::npos);
  }
}

TEST(Config, DefaultsApplied) {
  const auto cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.protocol, Protocol::kLanFl);
  EXPECT_DOUBLE_EQ(cfg.params.wan_mbps, 2.0);
  EXPECT_EQ(cfg.params.devices_per_round, 50);
  EXPECT_EQ(cfg.world.num_lans, 20);
  EXPECT_EQ(cfg.params.cloud_rounds, 5);
  EXPECT_TRUE(cfg.params.train.weighted_aggregation);
}

TEST(Config, RoundTrip) {
  auto cfg = parse_config(kMinimal);
  EXPECT_EQ(parse_config(dump_config(cfg)), cfg);
  cfg = parse_config(R"({"protocol": "wanfl", "seed": 9, "protocol_params": {"cloud_rounds": 2, "wan_mbps": 4.5, "devices_per_round": 8, "lans_per_round": 2},
      "world": {"bandwidth_mode": "fixed_bl", "lan_bandwidth_mbps": [5, 20]  , "num_lans": 2},
      "model": {"kind": "mlp", "hidden_units": 7}, "dataset": {"mode": "accounting_only"}})");
  EXPECT_EQ(cfg.seed, 9u);
  cfg.params.cloud_weighting = orchestrator::CloudWeighting::kLanTotal;
  EXPECT_EQ(parse_config(dump_config(cfg)).params.cloud_weighting, orchestrator::CloudWeighting::kLanTotal);
  EXPECT_EQ(cfg.params.seed, 9u);
  EXPECT_EQ(parse_config(dump_config(cfg)), cfg);
  EXPECT_EQ(dump_config(parse_config(dump_config(cfg))), dump_config(cfg));
}

TEST(Config, UnknownKeysRejectedWithPath) {
  EXPECT_NE(error_of(R"({"protocol": "lanfl", "protocol_params": {"cloud_rounds": 1}, "colour": 1})").find("colour"),
            std::string::npos);
  const auto msg = error_of(R"({"protocol": "lanfl", "protocol_params": {"cloud_rounds": 1, "rl": 3}})");
  EXPECT_NE(msg.find("protocol_params.rl"), std::string::npos) << msg;
}

TEST(Config, ParseErrorReportsLine) {
  const auto msg = error_of("{\n  \"protocol\": \"lanfl\",\n  \"seed\": ,\n}");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Config, ValidationNamesField) {
  const auto msg = error_of(R"({"protocol": "lanfl", "protocol_params": {"cloud_rounds": 0}})");
  EXPECT_NE(msg.find("protocol_params.cloud_rounds"), std::string::npos) << msg;
  const auto type_msg = error_of(R"({"protocol": "lanfl", "protocol_params": {"cloud_rounds": "ten"}})");
  EXPECT_NE(type_msg.find("protocol_params.cloud_rounds"), std::string::npos) << type_msg;
  const auto proto = error_of(R"({"protocol": "p2p", "protocol_params": {"cloud_rounds": 1}})");
  EXPECT_NE(proto.find("protocol"), std::string::npos);
  const auto lr = error_of(R"({"protocol": "lanfl", "protocol_params": {"cloud_rounds": 1}, "train": {"learning_rate": -1}})");
  EXPECT_NE(lr.find("train.learning_rate"), std::string::npos) << lr;
  const auto cw = error_of(R"({"protocol": "lanfl", "protocol_params": {"cloud_rounds": 1, "cloud_weighting": "x"}})");
  EXPECT_NE(cw.find("protocol_params.cloud_weighting"), std::string::npos) << cw;
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "lanfl_config_test.json";
  {
    std::ofstream out(path);
    out << kMinimal;
  }
  EXPECT_EQ(load_config(path), parse_config(kMinimal));
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}

}  // namespace
}  // namespace lanfl::harness
