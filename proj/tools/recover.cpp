#include "rsbl/experiment.hpp"
#include "rsbl/solver.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Sparse Bayesian signal and image recovery experiments"};
  std::string config_path;
  std::string out_dir;
  bool verbose = false;
  app.add_option("--config", config_path, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_flag("--verbose", verbose, "log every recovery");
  CLI11_PARSE(app, argc, argv);

  try {
    const rsbl::ExperimentConfig config = rsbl::load_config(config_path);
    const rsbl::ExperimentResult result = rsbl::run_experiment(config, out_dir, verbose ? &std::cerr : nullptr);
    rsbl::write_summary(std::cout, result);
  } catch (const rsbl::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
