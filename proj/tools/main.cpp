// Command line front end. All the actual work lives in perimetric/cli.hpp;
// this file only maps flags onto a RunConfig and prints the result.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "perimetric/cli.hpp"

namespace {

using perimetric::cli::Command;
using perimetric::cli::OutputFormat;
using perimetric::cli::RunConfig;

void add_format_flag(CLI::App* app, std::string& format) {
  app->add_option("--format", format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite metric spaces: validate, classify self-maps by contraction "
               "strength, run certified fixed point iteration, and build example spaces."};
  app.require_subcommand(1);

  RunConfig config;
  std::string format = "text";

  CLI::App* validate = app.add_subcommand("validate", "Check the metric axioms of an instance file");
  validate->add_option("--input", config.input_path, "Instance JSON file")->required();
  validate->add_option("--tol", config.tol, "Axiom tolerance (default: scaled to the diameter)");
  add_format_flag(validate, format);

  CLI::App* classify = app.add_subcommand("classify", "Measure contraction moduli of the instance's map");
  classify->add_option("--input", config.input_path, "Instance JSON file (must carry a map)")->required();
  classify->add_option("--f", config.f_spec, "Aggregator for image distances (e.g. sum, qnorm:2)");
  classify->add_option("--g", config.g_spec, "Aggregator for source distances");
  classify->add_option("--tol", config.tol, "Metric validation tolerance");
  classify->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
  add_format_flag(classify, format);

  CLI::App* solve = app.add_subcommand("solve", "Iterate the map and certify convergence");
  solve->add_option("--input", config.input_path, "Instance JSON file (must carry a map)")->required();
  solve->add_option("--start", config.start_label, "Starting point label (default: first point)");
  solve->add_option("--tol", config.tol, "Certified distance-to-limit target (default 0)");
  solve->add_option("--max-steps", config.max_steps, "Iteration budget")->check(CLI::PositiveNumber);
  solve->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
  add_format_flag(solve, format);

  CLI::App* gallery = app.add_subcommand("gallery", "Build a bundled example space and verify its claims");
  gallery->add_option("name", config.gallery_name, "three_point, figure1, or random")->required();
  gallery->add_option("--n", config.n, "Truncation depth (figure1) or point count (random)");
  gallery->add_option("--epsilon", config.epsilon, "Column width parameter (figure1)");
  gallery->add_option("--seed", config.seed, "Generator seed (random)");
  gallery->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
  gallery->add_option("--export", config.export_path, "Write the instance to this JSON file");
  add_format_flag(gallery, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : perimetric::cli::kExitInputError;
  }

  if (validate->parsed()) config.command = Command::Validate;
  if (classify->parsed()) config.command = Command::Classify;
  if (solve->parsed()) config.command = Command::Solve;
  if (gallery->parsed()) config.command = Command::Gallery;
  config.format = format == "json" ? OutputFormat::Json : OutputFormat::Text;

  const perimetric::cli::RunResult result = perimetric::cli::run(config);
  if (config.format == OutputFormat::Json)
    std::cout << result.report.dump(2) << "\n";
  else
    std::cout << result.text;
  return result.exit_code;
}
