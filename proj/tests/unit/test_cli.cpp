#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef OTW_CLI_PATH
#define OTW_CLI_PATH "otw"
#endif
#ifndef OTW_SCHEMA_PATH
#define OTW_SCHEMA_PATH "docs/output_schema.json"
#endif

using json = nlohmann::json;

namespace {

std::string capture(const std::string& args) {
  const auto path = std::filesystem::temp_directory_path() / "otw_cli_capture.json";
  const std::string command =
      std::string(OTW_CLI_PATH) + " " + args + " > " + path.string() + " 2>/dev/null";
  REQUIRE(std::system(command.c_str()) == 0);
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Just enough schema validation for the shipped document: type, const,
// required, properties, items.
bool validate(const json& node, const json& schema, std::string& failure) {
  if (schema.contains("const")) {
    if (node != schema["const"]) {
      failure = "const mismatch: " + node.dump();
      return false;
    }
  }
  if (schema.contains("type")) {
    const std::string type = schema["type"];
    const bool ok = (type == "object" && node.is_object()) ||
                    (type == "array" && node.is_array()) ||
                    (type == "string" && node.is_string()) ||
                    (type == "integer" && node.is_number_integer()) ||
                    (type == "number" && node.is_number()) ||
                    (type == "boolean" && node.is_boolean());
    if (!ok) {
      failure = "expected " + type + ", got " + node.dump().substr(0, 60);
      return false;
    }
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"]) {
      if (!node.contains(key.get<std::string>())) {
        failure = "missing required key '" + key.get<std::string>() + "'";
        return false;
      }
    }
  }
  if (schema.contains("properties") && node.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items()) {
      if (node.contains(key) && !validate(node[key], sub, failure)) {
        failure = "at '" + key + "': " + failure;
        return false;
      }
    }
  }
  if (schema.contains("items") && node.is_array()) {
    for (const auto& item : node) {
      if (!validate(item, schema["items"], failure)) return false;
    }
  }
  return true;
}

void check_against_schema(const std::string& text) {
  const json report = json::parse(text);
  REQUIRE(report.contains("command"));
  static const json schema = [] {
    std::ifstream in(OTW_SCHEMA_PATH);
    REQUIRE(in.good());
    return json::parse(in);
  }();
  const auto& defs = schema["$defs"];
  const std::string command = report["command"];
  REQUIRE(defs.contains(command));
  std::string failure;
  const bool ok = validate(report, defs[command], failure);
  INFO(command, " report: ", failure);
  CHECK(ok);
}

}  // namespace

TEST_CASE("CLI reports validate against the documented schema") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "otw_cli_schema";
  fs::create_directories(dir);
  const std::string d = dir.string();

  check_against_schema(capture("dist --a 1,0,2 --b 0,1,1 --metric otw --m 1"));
  check_against_schema(capture("verify --seed 3"));
  check_against_schema(capture("synth --per-class 5 --noise 0.05 --seed 3 --prefix " + d + "/set"));
  check_against_schema(capture("knn --train-data " + d + "/set_train.tsv --test-data " + d +
                               "/set_test.tsv --repeats 2 --seed 3 --metric l2"));
  check_against_schema(capture("cluster --input " + d + "/set_train.tsv --metrics otw --metrics l1"));
  check_against_schema(capture("bench --min-n 32 --max-n 64 --reps 3 --no-layers"));
  check_against_schema(capture(
      "train --layer linear --length 32 --pulse-width 8 --left 4 --right 20 --per-class 5 "
      "--epochs 3 --batch 4 --history " + d + "/hist.csv"));
}

TEST_CASE("CLI exit codes follow the usage/data/sweep contract") {
  const std::string cli = OTW_CLI_PATH;
  auto run = [&](const std::string& args) {
    const std::string command = cli + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(command.c_str()));
  };
  CHECK(run("dist --a 1,2 --b 2,1") == 0);
  CHECK(run("dist --no-such-flag") == 1);
  CHECK(run("unknown-command") == 1);
  CHECK(run("dist --a 1,2 --b 1,2,3") == 2);
  CHECK(run("knn --train-data /no/such/file --test-data /no/such/file") == 2);
}
