#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "doctest.h"
#include "drknn/embedding.hpp"
#include "drknn/report.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"drknn"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult result;
  result.code = drknn::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

// Unique path under the system temp directory, removed on destruction.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() / ("drknn_test_" + name)) {
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
  std::string str() const { return path.string(); }
  std::string slurp() const {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
};

}  // namespace

TEST_CASE("the bundled two-point problem solves through the CLI") {
  const CliResult r = run_cli({"lfd", "--dataset", "two_point", "--radii", "0.25"});
  REQUIRE(r.code == 0);
  CHECK_NOTHROW(drknn::validate_report(r.out));
  const json report = json::parse(r.out);
  CHECK(report["command"] == "lfd");
  CHECK(report["results"]["objective"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(report["results"]["minimax_risk"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(report["results"]["duality"]["gap"].get<double>() <= 1e-6);
  CHECK(report["results"]["decisions"] == json::array({1, 2}));
}

TEST_CASE("a rerun of the same command is byte-identical") {
  const std::vector<std::string> args = {"eval",      "--dataset", "two_gaussians",
                                         "--method",  "vanilla",   "--k",
                                         "3",         "--episodes", "3",
                                         "--seed",    "7"};
  const CliResult first = run_cli(args);
  const CliResult second = run_cli(args);
  REQUIRE(first.code == 0);
  CHECK(first.out == second.out);
}

TEST_CASE("missing required configuration exits 2 and names the field") {
  const CliResult r = run_cli({"lfd", "--dataset", "two_point"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("radii") != std::string::npos);

  const CliResult bad_method =
      run_cli({"eval", "--dataset", "two_gaussians", "--method", "svm"});
  CHECK(bad_method.code == 2);
  CHECK(bad_method.err.find("method") != std::string::npos);

  const CliResult no_command = run_cli({});
  CHECK(no_command.code == 2);

  const CliResult bad_command = run_cli({"optimize"});
  CHECK(bad_command.code == 2);

  const CliResult sweep_missing =
      run_cli({"sweep", "--dataset", "two_gaussians", "--method", "vanilla"});
  CHECK(sweep_missing.code == 2);
  CHECK(sweep_missing.err.find("sweep_parameter") != std::string::npos);
}

TEST_CASE("--help exits 0 and prints usage") {
  const CliResult r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--dataset") != std::string::npos);
}

TEST_CASE("verification failures exit 3") {
  // Class 2 has three samples, so its masses sit at thirds, off the 0.05
  // grid; a 0.01 budget reaches no grid candidate and the oracle gives up.
  TempFile data("thirds.txt");
  std::ofstream file(data.path);
  file << "0 1\n1 2\n2 2\n3 2\n";
  file.close();
  const CliResult r = run_cli(
      {"verify", "--dataset", data.str(), "--radii", "0.01", "--grid-step", "0.05"});
  CHECK(r.code == 3);
  CHECK(r.err.find("resolution") != std::string::npos);
}

TEST_CASE("the full verification suite runs through the CLI") {
  const CliResult r = run_cli({"verify"});
  REQUIRE(r.code == 0);
  CHECK_NOTHROW(drknn::validate_report(r.out));
  const json report = json::parse(r.out);
  CHECK(report["results"]["all_pass"] == true);
  CHECK(report["results"]["checks"].size() == 12);
}

TEST_CASE("classify reads query rows and reports votes") {
  TempFile queries("queries.txt");
  std::ofstream file(queries.path);
  file << "0.4 1.2\n2.8 0.4\n";
  file.close();
  const CliResult r = run_cli({"classify", "--dataset", "six_point", "--query-file",
                               queries.str(), "--radii", "0.2", "--k", "3"});
  REQUIRE(r.code == 0);
  CHECK_NOTHROW(drknn::validate_report(r.out));
  const json report = json::parse(r.out);
  REQUIRE(report["results"]["predicted"].size() == 2);
  CHECK(report["results"]["predicted"][0] == 1);
  CHECK(report["results"]["predicted"][1] == 2);
  CHECK(report["results"]["votes"].size() == 2);

  const CliResult missing = run_cli({"classify", "--dataset", "six_point", "--radii", "0.2"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("query_file") != std::string::npos);

  TempFile ragged("ragged.txt");
  std::ofstream bad(ragged.path);
  bad << "0.4 1.2\n2.8\n";
  bad.close();
  const CliResult mismatched = run_cli({"classify", "--dataset", "six_point", "--query-file",
                                        ragged.str(), "--radii", "0.2"});
  CHECK(mismatched.code == 2);
  CHECK(mismatched.err.find(":2") != std::string::npos);
}

TEST_CASE("--out writes the report to a file instead of stdout") {
  TempFile out("report.json");
  const CliResult r =
      run_cli({"lfd", "--dataset", "two_point", "--radii", "0.25", "--out", out.str()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const std::string contents = out.slurp();
  CHECK_NOTHROW(drknn::validate_report(contents));
  CHECK(json::parse(contents)["results"]["objective"].get<double>() ==
        doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("--table emits a CSV next to the JSON report") {
  TempFile out("eval.json");
  const std::filesystem::path csv_path = out.path.string() + ".csv";
  std::filesystem::remove(csv_path);
  const CliResult r = run_cli({"eval", "--dataset", "two_gaussians", "--method", "vanilla",
                               "--k", "3", "--episodes", "2", "--seed", "5", "--out", out.str(),
                               "--table"});
  REQUIRE(r.code == 0);
  std::ifstream csv(csv_path);
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "episode,accuracy,chosen_radius,kept_fraction");
  std::filesystem::remove(csv_path);

  const CliResult no_out = run_cli(
      {"eval", "--dataset", "two_gaussians", "--method", "vanilla", "--table"});
  CHECK(no_out.code == 2);
  CHECK(no_out.err.find("table") != std::string::npos);

  const CliResult wrong_command =
      run_cli({"lfd", "--dataset", "two_point", "--radii", "0.25", "--out", out.str(), "--table"});
  CHECK(wrong_command.code == 2);
}

TEST_CASE("a config file drives a run and flags override it") {
  TempFile config("config.json");
  std::ofstream file(config.path);
  file << R"({"command": "lfd", "dataset": "two_point", "radii": [0.25], "k": 1})";
  file.close();
  const CliResult from_config = run_cli({"--config", config.str()});
  REQUIRE(from_config.code == 0);
  const json report = json::parse(from_config.out);
  CHECK(report["results"]["objective"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(report["config"]["k"] == 1);

  const CliResult overridden = run_cli({"--config", config.str(), "--radii", "0.1"});
  REQUIRE(overridden.code == 0);
  CHECK(json::parse(overridden.out)["config"]["radii"][0].get<double>() == 0.1);

  TempFile bad_config("bad_config.json");
  std::ofstream bad(bad_config.path);
  bad << R"({"command": "lfd", "radius": 0.25})";
  bad.close();
  const CliResult unknown = run_cli({"--config", bad_config.str()});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("radius") != std::string::npos);
}

TEST_CASE("sweep runs end to end with CSV output") {
  TempFile out("sweep.json");
  const std::filesystem::path csv_path = out.path.string() + ".csv";
  std::filesystem::remove(csv_path);
  const CliResult r = run_cli({"sweep", "--dataset", "two_gaussians", "--method", "vanilla",
                               "--sweep-parameter", "k", "--sweep-values", "1,3,5", "--episodes",
                               "2", "--seed", "9", "--out", out.str(), "--table"});
  REQUIRE(r.code == 0);
  const json report = json::parse(out.slurp());
  CHECK(report["results"]["parameter"] == "k");
  REQUIRE(report["results"]["values"].size() == 3);
  REQUIRE(report["results"]["points"].size() == 3);
  CHECK(report["results"]["points"][0]["value"].get<double>() == 1.0);
  CHECK(report["results"]["points"][0]["accuracies"].size() == 2);
  std::ifstream csv(csv_path);
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == "parameter,value,episode,accuracy,chosen_radius,kept_fraction");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 6);  // three values x two episodes
  std::filesystem::remove(csv_path);
}

TEST_CASE("a dataset file loads through the same flag as the builtins") {
  const CliResult r = run_cli({"lfd", "--dataset",
                               std::string(DRKNN_DATA_DIR) + "/two_point.txt", "--radii",
                               "0.25"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["results"]["objective"].get<double>() ==
        doctest::Approx(1.5).epsilon(1e-9));

  const CliResult missing = run_cli({"lfd", "--dataset", "/no/such/pool.txt", "--radii", "0.2"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/no/such/pool.txt") != std::string::npos);
}

TEST_CASE("embeddings and standardization apply before classification") {
  // Fit an embedding on the bundled pool, save it, and classify through it.
  const std::string pool_path = std::string(DRKNN_DATA_DIR) + "/six_point.txt";
  const drknn::Dataset pool = drknn::load_dataset(pool_path);
  const drknn::LinearEmbedding embedding = drknn::fit_pca(pool, 1);
  TempFile embedding_file("embedding.txt");
  drknn::save_embedding(embedding, embedding_file.str());

  TempFile queries("embed_queries.txt");
  std::ofstream file(queries.path);
  file << "0.4 1.2\n2.8 0.4\n";
  file.close();

  const CliResult r = run_cli({"classify", "--dataset", pool_path, "--query-file", queries.str(),
                               "--embedding", embedding_file.str(), "--standardize", "--radii",
                               "0.1", "--k", "3"});
  REQUIRE(r.code == 0);
  const json report = json::parse(r.out);
  CHECK(report["results"]["predicted"].size() == 2);
  CHECK(report["config"]["standardize"] == true);
  CHECK(report["config"]["embedding"].get<std::string>() == embedding_file.str());
}
