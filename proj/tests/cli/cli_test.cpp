#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dhlab_cli/cli.hpp"

using namespace dhlab;
using namespace dhlab::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json json_of(const Run& r) { return Json::parse(r.out); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "dhlab_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Moments, Lebesgue) {
  const auto r = invoke({"moments", "density:gamma=0,delta=0", "--order", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = json_of(r)["tables"]["moments"]["rows"];
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[4][0].get<int>(), 4);
  EXPECT_NEAR(rows[4][1].get<double>(), 0.2, 1e-12);
}

TEST(Moments, AtomicPowers) {
  const auto r = invoke({"moments", "atomic:(0.5,1)", "--order", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = json_of(r)["tables"]["moments"]["rows"];
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(rows[n][1].get<double>(), std::pow(0.5, n));
}

TEST(Moments, MalformedSpecIsParseError) {
  const auto r = invoke({"moments", "density:gamma="});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find("measure/parse_measure"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Apply, DhOnPointMass) {
  const auto r = invoke({"apply", "dh", "atomic:(0.5,1)", "poly:1", "--N", "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = json_of(r)["tables"]["coefficients"]["rows"];
  ASSERT_EQ(rows.size(), 65u);
  for (int n = 0; n <= 64; ++n) {
    const double expected = (n + 1) * std::pow(0.5, n);
    EXPECT_NEAR(rows[n][1].get<double>(), expected, 1e-15 * expected);
    EXPECT_EQ(rows[n][2].get<double>(), 0.0);
  }
}

TEST(Apply, IntegralAtOriginIsMeasureIntegral) {
  // d mu = (1-t) dt, f = 1 + 2t: int (1-t)(1+2t) dt = 5/6
  const auto r = invoke({"apply", "integral", "density:gamma=1,delta=0", "poly:1,2", "--alpha", "2", "--z", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto row = json_of(r)["tables"]["values"]["rows"][0];
  EXPECT_NEAR(row[2].get<double>(), 5.0 / 6.0, 1e-12);
  EXPECT_EQ(row[3].get<double>(), 0.0);
}

TEST(Apply, EquivalenceResidualColumn) {
  const auto r = invoke({"apply", "dh", "density:gamma=1,delta=0", "flog:b=0.9", "--N", "256", "--check-equivalence"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json_of(r);
  const auto values = doc["tables"]["values"];
  ASSERT_EQ(values["columns"].back(), "residual");
  for (const auto& row : values["rows"]) EXPECT_LT(row.back().get<double>(), 1e-6);
  EXPECT_EQ(doc["summary"]["violations"].get<int>(), 0);
}

TEST(Apply, ExplicitZGridIsEchoed) {
  const auto r = invoke({"apply", "hilbert", "atomic:(0.5,1)", "poly:0,1", "--N", "8", "--z", "0.25-0.5i", "--z=-0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json_of(r);
  EXPECT_EQ(doc["config"]["z"], Json::array({"0.25-0.5i", "-0.3"}));
  EXPECT_FALSE(doc["config"].contains("space"));
}

TEST(Apply, WellDefinedFailureNamesTheCase) {
  // Lebesgue measure on Bloch(3) needs int (1-t)^{-2} dt < infinity
  const auto r = invoke({"apply", "dh", "density:gamma=0,delta=0", "poly:1", "--space", "bloch:3"});
  EXPECT_EQ(r.code, kExitPrecondition);
  EXPECT_NE(r.err.find("operators/well_defined"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("power-moment"), std::string::npos) << r.err;
}

TEST(Apply, InapplicableFlagsRejected) {
  EXPECT_EQ(invoke({"apply", "integral", "atomic:(0.5,1)", "poly:1", "--N", "8"}).code, kExitParse);
  EXPECT_EQ(invoke({"apply", "dh", "atomic:(0.5,1)", "poly:1", "--alpha", "2"}).code, kExitParse);
  EXPECT_EQ(invoke({"apply", "hilbert", "atomic:(0.5,1)", "poly:1", "--space", "bmoa"}).code, kExitParse);
  EXPECT_EQ(invoke({"apply", "conv", "atomic:(0.5,1)", "poly:1"}).code, kExitParse);
}

TEST(Carleson, WorkedExamples) {
  auto verdict = [](std::vector<std::string> args) {
    const auto r = invoke(std::move(args));
    EXPECT_EQ(r.code, 0) << r.err;
    return json_of(r)["summary"];
  };
  EXPECT_EQ(verdict({"carleson", "density:gamma=1,delta=2", "--s", "2", "--beta", "1"})["verdict"], "Bounded");
  EXPECT_EQ(verdict({"carleson", "density:gamma=1,delta=0", "--s", "2", "--beta", "1"})["verdict"], "DivergesAtOne");
  const auto point = verdict({"carleson", "atomic:(0.9,1)", "--s", "2", "--beta", "0"});
  EXPECT_EQ(point["verdict"], "Bounded");
  EXPECT_NEAR(point["sup_constant"].get<double>(), 100.0, 1e-9);
}

TEST(ExitCodes, ParseAndPrecondition) {
  EXPECT_EQ(invoke({}).code, kExitParse);
  EXPECT_EQ(invoke({"moments"}).code, kExitParse);
  EXPECT_EQ(invoke({"moments", "atomic:(0.5,1)", "--order", "x"}).code, kExitParse);
  EXPECT_EQ(invoke({"moments", "atomic:(0.5,1)", "--format", "xml"}).code, kExitParse);
  EXPECT_EQ(invoke({"moments", "atomic:(0.5,1)", "--bogus"}).code, kExitParse);
  EXPECT_EQ(invoke({"carleson", "atomic:(0.5,1)"}).code, kExitParse);
  EXPECT_EQ(invoke({"experiment", "T9", "atomic:(0.5,1)"}).code, kExitParse);
  EXPECT_EQ(invoke({"apply", "dh", "atomic:(0.5,1)", "poly:1", "--z", "1+x"}).code, kExitParse);

  const auto z = invoke({"apply", "dh", "atomic:(0.5,1)", "poly:1", "--z", "0.6+0.8i"});
  EXPECT_EQ(z.code, kExitPrecondition);
  EXPECT_NE(z.err.find("cli/validate"), std::string::npos) << z.err;
  EXPECT_EQ(invoke({"moments", "atomic:(0.5,1)", "--order", "-1"}).code, kExitPrecondition);
  EXPECT_EQ(invoke({"carleson", "atomic:(0.5,1)", "--s", "0"}).code, kExitPrecondition);
  EXPECT_EQ(invoke({"experiment", "T3.6", "density:gamma=2,delta=0"}).code, kExitPrecondition);
  EXPECT_EQ(invoke({"experiment", "T2.5", "density:gamma=1,delta=0", "--grid-nr", "40"}).code, kExitPrecondition);
  EXPECT_EQ(invoke({"experiment", "T2.5", "density:gamma=1,delta=0", "--b-ladder", "0.99,0.9"}).code,
            kExitPrecondition);
  EXPECT_EQ(invoke({"experiment", "T2.5", "density:gamma=1,delta=0", "--r", "1"}).code, kExitPrecondition);
}

TEST(ExitCodes, ValidationHappensBeforeWork) {
  // the bad ladder is rejected before any sweep starts, so this returns at once
  const auto r = invoke({"experiment", "T2.5", "density:gamma=1,delta=0", "--b-ladder", "0.9,1.5"});
  EXPECT_EQ(r.code, kExitPrecondition);
  EXPECT_NE(r.err.find("cli/validate"), std::string::npos) << r.err;
}

TEST(ExitCodes, HelpIsSuccess) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("experiment"), std::string::npos);
}

TEST(Experiment, ThresholdVerdicts) {
  const auto bounded = invoke({"experiment", "T3.4", "density:gamma=1,delta=0"});
  ASSERT_EQ(bounded.code, 0) << bounded.err;
  EXPECT_EQ(json_of(bounded)["summary"]["verdict"], "ConsistentBounded");

  const auto unbounded = invoke({"experiment", "T2.5", "density:gamma=1,delta=0"});
  ASSERT_EQ(unbounded.code, 0) << unbounded.err;
  EXPECT_EQ(json_of(unbounded)["summary"]["verdict"], "ConsistentUnbounded");

  const auto large = invoke({"experiment", "T3.6", "--alpha", "2", "density:gamma=2,delta=0"});
  ASSERT_EQ(large.code, 0) << large.err;
  const auto doc = json_of(large);
  EXPECT_EQ(doc["summary"]["verdict"], "ConsistentBounded");
  EXPECT_EQ(doc["tables"]["plot"]["columns"], Json::array({"b", "pairing", "tail_ratio", "norm_ratio"}));
  EXPECT_EQ(doc["tables"]["plot"]["rows"].size(), 4u);
}

TEST(Experiment, DisagreementStillExitsZero) {
  // a ladder that stops at b = 0.6 cannot see the divergence; the mismatch is recorded, not fatal
  const auto r = invoke({"experiment", "T2.5", "density:gamma=1,delta=0", "--b-ladder", "0.5,0.6", "--grid-nr", "16",
                      "--grid-ntheta", "32", "--a-angles", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json_of(r);
  EXPECT_FALSE(doc["summary"]["agrees"].get<bool>());
  EXPECT_FALSE(doc["notes"].empty());
}

TEST(Determinism, ExperimentTwiceIsByteIdentical) {
  const std::vector<std::string> args = {"experiment", "T3.5", "density:gamma=1,delta=2", "--b-ladder", "0.9,0.99",
                                         "--grid-nr", "32", "--grid-ntheta", "64"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Replay, JsonAndCsvRoundTrip) {
  const std::vector<std::vector<std::string>> runs = {
      {"moments", "density:gamma=0.5,delta=1", "--order", "6"},
      {"apply", "dh", "atomic:(0.5,1);(0.9,0.25)", "cauchy:b=0.5,e=2", "--N", "16", "--check-equivalence"},
      {"apply", "integral", "density:gamma=1,delta=0", "flog:b=0.7", "--alpha", "1.5", "--z", "0.3+0.2i"},
      {"carleson", "density:gamma=1,delta=1", "--s", "2", "--beta", "0.5", "--k-max", "30"},
      {"experiment", "T3.4", "atomic:(0.5,1)", "--alpha", "0.25", "--b-ladder", "0.9,0.99", "--grid-nr", "16",
       "--grid-ntheta", "32", "--r", "0.7"},
  };
  int i = 0;
  for (const auto& base : runs) {
    for (const std::string format : {"json", "csv"}) {
      const auto path = scratch("replay_" + std::to_string(i++) + "." + format);
      auto args = base;
      args.insert(args.end(), {"--format", format, "--out", path.string()});
      const auto first = invoke(args);
      ASSERT_EQ(first.code, 0) << first.err;
      EXPECT_TRUE(first.out.empty());
      const auto again = invoke({"replay", path.string()});
      ASSERT_EQ(again.code, 0) << again.err;
      EXPECT_EQ(again.out, slurp(path)) << base[0] << " " << format;
    }
  }
}

TEST(Replay, UnknownConfigKeyRejected) {
  auto doc = json_of(invoke({"moments", "atomic:(0.5,1)", "--order", "2"}));
  doc["config"]["grid_nr"] = 48;  // not a moments key
  const auto path = scratch("unknown_key.json");
  std::ofstream(path) << doc.dump();
  const auto r = invoke({"replay", path.string()});
  EXPECT_EQ(r.code, kExitParse);
  EXPECT_NE(r.err.find("unknown key 'grid_nr'"), std::string::npos) << r.err;

  const auto csv = scratch("unknown_key.csv");
  std::ofstream(csv) << "config.command,moments\nconfig.measure,\"atomic:(0.5,1)\"\nconfig.colour,red\n\n";
  EXPECT_EQ(invoke({"replay", csv.string()}).code, kExitParse);
}

TEST(Replay, WrongTypeAndMissingFile) {
  const auto path = scratch("wrong_type.json");
  std::ofstream(path) << R"js({"config": {"command": "moments", "measure": "atomic:(0.5,1)", "order": "ten"}})js";
  EXPECT_EQ(invoke({"replay", path.string()}).code, kExitParse);
  EXPECT_EQ(invoke({"replay", scratch("does_not_exist.json").string()}).code, kExitPrecondition);
}

TEST(Output, RelativePathUsesOutputDir) {
  const auto dir = scratch("outdir");
  std::filesystem::remove_all(dir);
  ::setenv("DHLAB_OUTPUT_DIR", dir.c_str(), 1);
  const auto r = invoke({"moments", "atomic:(0.5,1)", "--format", "csv", "--out", "sub/m.csv"});
  ::unsetenv("DHLAB_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(dir / "sub" / "m.csv");
  EXPECT_NE(text.find("config.out,sub/m.csv\n"), std::string::npos);
  EXPECT_NE(text.find("\nn,mu\n0,1\n"), std::string::npos) << text;
}

TEST(Csv, QuotingRoundTripProperty) {
  std::mt19937 rng(7);
  const std::string alphabet = "ab,\" ;:()=";
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> fields(1 + rng() % 4);
    std::string line;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const int len = static_cast<int>(rng() % 8);
      for (int k = 0; k < len; ++k) fields[j] += alphabet[rng() % alphabet.size()];
      line += (j ? "," : "") + csv_field(fields[j]);
    }
    EXPECT_EQ(parse_csv_record(line), fields) << line;
  }
}

TEST(Complex, FormatParseRoundTripProperty) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    cd z(u(rng), u(rng));
    if (trial % 5 == 0) z.real(0.0);
    if (trial % 7 == 0) z.imag(0.0);
    if (trial % 11 == 0) z *= 1e-7;
    EXPECT_EQ(parse_complex(format_complex(z)), z) << format_complex(z);
  }
  EXPECT_EQ(parse_complex("0.5i"), cd(0.0, 0.5));
  EXPECT_EQ(parse_complex("-1e-3-2e-3i"), cd(-1e-3, -2e-3));
  EXPECT_THROW(parse_complex("i"), Error);
  EXPECT_THROW(parse_complex("0.5+"), Error);
}
