// decopt: experiment runner for the decentralized solvers.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "decopt/dataio.hpp"
#include "decopt/error.hpp"
#include "decopt/experiment.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

nlohmann::json read_descriptor(const std::string& arg) {
  // Inline JSON or a path to a file holding it.
  std::string text = arg;
  if (arg.find('{') == std::string::npos) {
    std::ifstream in(arg);
    if (!in) throw decopt::IoError("cannot open graph descriptor " + arg);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw decopt::InvalidArgument(std::string("graph descriptor is not valid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized optimization experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the solvers listed in a config file");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();

  std::string graph_arg;
  auto* spectrum = app.add_subcommand("spectrum", "print the spectral summary of a topology");
  spectrum->add_option("--graph", graph_arg, "topology descriptor: JSON text or a file")
      ->required();

  std::string kind = "synth";
  int n_samples = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  auto* gen = app.add_subcommand("gen-data", "write a synthetic LIBSVM dataset");
  gen->add_option("--kind", kind, "dataset kind")->check(CLI::IsMember({"synth"}));
  gen->add_option("--n", n_samples, "number of samples")->required()->check(CLI::PositiveNumber);
  gen->add_option("--d", dim, "feature dimension")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--out", out_path, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run) {
      const auto cfg = decopt::load_config(config_path);
      const auto summary = decopt::run_experiment(cfg);
      for (const auto& r : summary["runs"]) {
        std::cout << r["algorithm"].get<std::string>() << ": " << r["status"].get<std::string>()
                  << " after " << r["iterations"] << " iterations, sq_dist "
                  << r["final_sq_dist"] << ", grad_evals " << r["grad_evals"]
                  << ", comm_rounds " << r["comm_rounds"] << '\n';
      }
      std::cout << "wrote " << (cfg.output_dir / "summary.json").string() << '\n';
    } else if (*spectrum) {
      const auto spec = decopt::parse_topology(read_descriptor(graph_arg));
      std::cout << decopt::spectrum_report(spec).dump(2) << '\n';
    } else if (*gen) {
      const auto ds = decopt::synth_classification(n_samples, dim, seed);
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw decopt::IoError("cannot open " + out_path + " for writing");
      decopt::write_libsvm(ds, out);
      out.flush();
      if (!out) throw decopt::IoError("failed writing " + out_path);
    }
  } catch (const decopt::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
