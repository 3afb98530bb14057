#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "confront/cli.hpp"

using namespace confront::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

// Header and one data row of a CSV rendering.
std::map<std::string, std::string> csv_row(const std::string& text, std::size_t row = 0) {
  const auto lines = split(text, '\n');
  const auto header = csv_fields(lines.at(0));
  const auto values = csv_fields(lines.at(row + 1));
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < header.size(); ++i) m[header[i]] = i < values.size() ? values[i] : "";
  return m;
}

// "key: value" lines of a text record.
std::map<std::string, std::string> text_record(const std::string& text) {
  std::map<std::string, std::string> m;
  for (const std::string& line : split(text, '\n')) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string value = line.substr(colon + 1);
    value.erase(0, value.find_first_not_of(' '));
    m[line.substr(0, colon)] = value;
  }
  return m;
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("confront_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("format_number and parse_number") {
  CHECK(format_number(47.748743718592899, 6) == "47.7487");
  CHECK(format_number(-3.0, 6) == "-3");
  CHECK(format_number(-0.0, 6) == "0");
  CHECK(format_number(INFINITY, 6) == "inf");
  CHECK(format_number(-INFINITY, 6) == "-inf");
  CHECK(parse_number("inf") == INFINITY);
  CHECK(parse_number("-inf") == -INFINITY);
  CHECK(parse_number("1e-3") == 0.001);
  CHECK_THROWS(parse_number("1.5x"));
  CHECK_THROWS(parse_number("nan"));
  CHECK_THROWS(parse_number(""));
}

TEST_CASE("delta command") {
  const Run r = run({"delta", "--gamma", "0.99", "--p", "0.01", "--cost", "1", "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  const auto row = csv_row(r.out);
  CHECK(std::abs(std::stod(row.at("delta")) - 47.75) <= 0.01);
  CHECK(row.at("regime") == "Misaligned");
  CHECK(row.at("significant") == "true");

  const Run identity = run({"delta", "--gamma", "0.8", "--p", "0", "--cost", "2", "--format", "csv"});
  CHECK(csv_row(identity.out).at("delta") == "-3");

  const Run bad = run({"delta", "--gamma", "1.0", "--p", "0.01", "--cost", "1"});
  CHECK(bad.code == kExitBadInput);
  CHECK(bad.err.find("gamma must be < 1") != std::string::npos);
  CHECK(bad.out.empty());

  const Run aligned = run({"delta", "--gamma", "0.9", "--p", "0.1", "--aligned", "--format", "csv"});
  REQUIRE(aligned.code == kExitOk);
  CHECK(csv_row(aligned.out).at("delta") == "-inf");
  CHECK(csv_row(aligned.out).at("regime") == "Aligned");
}

TEST_CASE("thresholds command") {
  const Run r = run({"thresholds", "--p", "0.01", "--cost", "0", "--gamma", "0.99", "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  const auto row = csv_row(r.out);
  CHECK(row.at("gamma_star") == "0.909091");
  CHECK(row.at("status") == "ok");
  CHECK(std::abs(std::stod(row.at("c_star")) - 48.75) <= 0.01);

  const Run none = run({"thresholds", "--p", "0", "--cost", "0", "--format", "csv"});
  CHECK(none.code == kExitOk);
  CHECK(csv_row(none.out).at("status") == "NoThreshold");
  CHECK(csv_row(none.out).at("gamma_star").empty());

  const Run half = run({"thresholds", "--p", "1", "--cost", "0", "--format", "csv"});
  CHECK(csv_row(half.out).at("gamma_star") == "0.5");
}

TEST_CASE("table1 and sweep commands") {
  const Run t = run({"table1", "--format", "csv"});
  REQUIRE(t.code == kExitOk);
  CHECK(split(t.out, '\n').size() == 8);  // header, six rows, trailing empty
  CHECK(split(t.out, '\n')[0] ==
        "label,gamma,p,cost,delta,rational,gamma_star,c_star,reference_label,reference_delta");

  const Run s = run({"sweep", "--gammas", "0.5,0.9", "--ps", "0,0.1", "--costs", "1,inf", "--format", "csv"});
  REQUIRE(s.code == kExitOk);
  const auto lines = split(s.out, '\n');
  CHECK(lines[0] == "label,gamma,p,cost,delta,rational,gamma_star,c_star");
  CHECK(lines.size() == 10);
  CHECK(csv_row(s.out, 0).at("gamma_star").empty());
  CHECK(csv_row(s.out, 1).at("delta") == "-inf");

  const Run bad = run({"sweep", "--gammas", "0.5,1.5", "--ps", "0.1", "--costs", "1"});
  CHECK(bad.code == kExitBadInput);
  CHECK(bad.err.find("1.5") != std::string::npos);
}

TEST_CASE("game command") {
  const Run r = run({"game", "--gamma", "0.9", "--p", "0.1", "--cost", "5", "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  const auto row = csv_row(r.out);
  CHECK(row.at("classification") == "PeacePossible");
  CHECK(row.at("pure_nash").find("(Trust,Cooperate)") != std::string::npos);

  const Run bad = run({"game", "--gamma", "0.9", "--p", "0.1", "--cost", "5", "--trust-fight", "20"});
  CHECK(bad.code == kExitBadInput);
  CHECK(bad.err.find("preempt_fight > trust_fight") != std::string::npos);
}

TEST_CASE("multi command") {
  const Run r = run({"multi", "--deltas=-1,0.5", "--format", "csv"});
  REQUIRE(r.code == kExitOk);
  CHECK(csv_row(r.out).at("stability") == "Unstable");
  CHECK(csv_row(r.out).at("defectors") == "1");

  const Run stable = run({"multi", "--deltas=-1,-2.5,-inf", "--format", "csv"});
  CHECK(csv_row(stable.out).at("stability") == "Stable");

  const std::string a = write_temp("agent_a.json", R"({"gamma": 0.9, "p": 0.1, "cost": 5})");
  const std::string b = write_temp("agent_b.json", R"({"gamma": 0.99, "p": 0.01, "cost": 1})");
  const Run files = run({"multi", "--scenario", a, "--scenario", b, "--format", "csv"});
  REQUIRE(files.code == kExitOk);
  CHECK(csv_row(files.out).at("defectors") == "1");

  CHECK(run({"multi", "--deltas=1,nan"}).code == kExitBadInput);
  CHECK(run({"multi"}).code == kExitBadInput);
}

TEST_CASE("simulate and powerseek commands") {
  const Run s = run({"simulate", "--gamma", "0.99", "--p", "0.01", "--cost", "1", "--n", "20000", "--seed", "3",
                     "--format", "json"});
  REQUIRE(s.code == kExitOk);
  const auto j = nlohmann::json::parse(s.out);
  CHECK(j.at("within_4se").get<bool>());
  CHECK(j.at("n").get<long>() == 20000);

  CHECK(run({"simulate", "--gamma", "0.99", "--p", "0.01", "--cost", "1", "--n", "1"}).code == kExitBadInput);
  CHECK(run({"simulate", "--gamma", "0.999999", "--p", "0.01", "--cost", "1", "--n", "10", "--eps-tail", "1e-300"})
            .code == kExitBadInput);

  const Run p = run({"powerseek", "--gamma", "0.99", "--p", "0.01", "--cost", "0", "--n", "1000", "--format", "json"});
  REQUIRE(p.code == kExitOk);
  CHECK(nlohmann::json::parse(p.out).at("fraction").get<double>() == 1.0);
  CHECK(run({"powerseek", "--gamma", "0.9", "--p", "0.1", "--sampler", "bogus"}).code == kExitBadInput);
}

TEST_CASE("validate command") {
  const Run r = run({"validate", "--format", "csv"});
  CHECK(r.code == kExitOk);
  const auto lines = split(r.out, '\n');
  REQUIRE(lines.size() > 2);
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    CHECK(lines[i].find(",PASS,") != std::string::npos);
  }
}

TEST_CASE("config file") {
  const std::string cfg = write_temp("cfg.json", R"({"gamma": 0.99, "p": 0.01, "cost": 1, "format": "csv"})");
  const Run r = run({"--config", cfg, "delta"});
  REQUIRE(r.code == kExitOk);
  CHECK(std::abs(std::stod(csv_row(r.out).at("delta")) - 47.75) <= 0.01);

  // Flags override the file.
  const Run o = run({"--config", cfg, "delta", "--cost", "50"});
  REQUIRE(o.code == kExitOk);
  CHECK(std::stod(csv_row(o.out).at("delta")) < 0.0);

  const std::string typo = write_temp("typo.json", R"({"gama": 0.99, "p": 0.01, "cost": 1})");
  const Run t = run({"--config", typo, "delta"});
  CHECK(t.code == kExitBadInput);
  CHECK(t.err.find("gama") != std::string::npos);

  const std::string broken = write_temp("broken.json", "{ not json");
  CHECK(run({"--config", broken, "delta"}).code == kExitBadInput);
  CHECK(run({"--config", "/nonexistent/x.json", "delta"}).code == kExitBadInput);
}

TEST_CASE("exit-code contract over malformed inputs") {
  const std::vector<std::vector<std::string>> malformed = {
      {},
      {"bogus"},
      {"delta"},
      {"delta", "--gamma", "abc", "--p", "0.1", "--cost", "1"},
      {"delta", "--gamma", "0.5", "--p", "1.5", "--cost", "1"},
      {"delta", "--gamma", "0.5", "--p", "0.1", "--cost", "-1"},
      {"delta", "--gamma", "-0.1", "--p", "0.1", "--cost", "1"},
      {"delta", "--gamma", "0.5", "--p", "0.1", "--cost", "1", "--reward", "0"},
      {"delta", "--gamma", "0.5", "--p", "0.1", "--cost", "1", "--aligned"},
      {"delta", "--gamma", "0.5", "--p", "0.1", "--cost", "1", "--format", "xml"},
      {"delta", "--gamma", "0.5", "--p", "0.1", "--cost", "1", "--precision", "0"},
      {"delta", "--gamma", "0.5", "--p", "0.1", "--cost", "1", "--precision", "18"},
      {"delta", "--gamma", "0.5", "--p", "0.1", "--cost", "1", "--significance", "0"},
      {"delta", "--gamma", "0.5", "--p", "0.1", "--cost", "1", "--unknown-flag", "3"},
      {"thresholds", "--cost", "1"},
      {"thresholds", "--p", "0.1", "--cost", "1", "--tol", "-1"},
      {"sweep", "--gammas", "0.5", "--ps", "0.1"},
      {"sweep", "--gammas", "x", "--ps", "0.1", "--costs", "1"},
      {"simulate", "--gamma", "0.5", "--p", "0.1", "--cost", "1", "--policy", "fight"},
      {"simulate", "--gamma", "0.5", "--p", "0.1", "--aligned"},
  };
  for (const auto& args : malformed) {
    CAPTURE(args.size());
    const Run r = run(args);
    CHECK(r.code == kExitBadInput);
    CHECK_FALSE(r.err.empty());
  }
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("format equivalence and round-trip") {
  for (const std::string precision : {"6", "9", "17"}) {
    const std::vector<std::string> base = {"delta", "--gamma", "0.97", "--p", "0.03", "--cost", "7.3",
                                           "--reward", "2.5", "--precision", precision};
    auto with = [&](const char* fmt) {
      auto args = base;
      args.insert(args.end(), {"--format", fmt});
      return run(args).out;
    };
    const auto text = text_record(with("text"));
    const auto csv = csv_row(with("csv"));
    const auto json = nlohmann::json::parse(with("json"));
    const int digits = std::stoi(precision);
    for (const char* key : {"v_no_conf", "v_conf", "delta", "gamma", "p", "cost", "reward"}) {
      CAPTURE(key);
      CHECK(text.at(key) == csv.at(key));
      const double from_json = json.at(key).get<double>();
      CHECK(format_number(from_json, digits) == csv.at(key));
      // Re-parsed value lies within one unit in the last printed digit.
      const double v = parse_number(csv.at(key));
      CHECK(format_number(v, digits) == csv.at(key));
    }
  }

  // Table rows too.
  const auto csv_lines = split(run({"table1", "--format", "csv"}).out, '\n');
  const auto json_lines = split(run({"table1", "--format", "json"}).out, '\n');
  for (std::size_t i = 0; i < 6; ++i) {
    const auto row = csv_row(run({"table1", "--format", "csv"}).out, i);
    const auto obj = nlohmann::json::parse(json_lines[i]);
    CHECK(format_number(obj.at("delta").get<double>(), 6) == row.at("delta"));
    CHECK(obj.at("label").get<std::string>() == row.at("label"));
  }
  CHECK(csv_lines.size() == 8);
}
