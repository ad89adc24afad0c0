// Batch front end: reads one JSON job from --input or stdin, writes the
// report to stdout and exits with the job's status code.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gieseker/jobs.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Germ-level correspondence between twisted bundle charts and Gieseker data"};
  std::string input;
  gieseker::JobOverrides ov;
  int indent = 2;
  app.add_option("--input", input, "job file (default: stdin)");
  app.add_option("--seed", ov.seed, "random seed");
  app.add_option("--prime", ov.prime, "prime p of the base field");
  app.add_option("--precision", ov.precision, "series precision N");
  app.add_option("--trials", ov.trials, "number of invariance trials");
  app.add_option("--json-indent", indent, "indentation of the report, -1 for one line")->check(CLI::Range(-1, 16));
  app.set_version_flag("--version", std::string(gieseker::kVersion));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  std::string text;
  if (input.empty()) {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(input);
    if (!in) {
      std::cerr << "cannot read " << input << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  nlohmann::json job;
  try {
    job = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    const nlohmann::json report = {{"version", gieseker::kVersion},
                                   {"status", "error"},
                                   {"error", gieseker::error_json("", std::string("invalid JSON: ") + err.what())}};
    std::cout << report.dump(indent) << "\n";
    return 2;
  }
  const gieseker::JobOutcome out = gieseker::run_job(job, ov);
  std::cout << out.report.dump(indent) << "\n";
  return out.exit_code;
}
