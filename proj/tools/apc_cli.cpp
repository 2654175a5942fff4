#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "apc/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Analog photonic computation toolkit"};
  app.require_subcommand(1);
  apc::RunConfig cfg;
  std::string b_spec;

  auto* sim = app.add_subcommand("simulate", "Solve a circuit for its sink states");
  sim->add_option("circuit", cfg.inputs, "Circuit JSON file(s)")->required();
  sim->add_option("--input", cfg.input_state, "State JSON, or object of source id to state")->required();
  sim->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sim->add_flag("--batch", cfg.batch, "Solve several circuits in parallel");

  auto* dec = app.add_subcommand("decompose", "Factorize a 2x2 gate");
  dec->add_option("gate", cfg.inputs, "Gate JSON file")->required();
  dec->add_option("--method", cfg.method)
      ->required()
      ->check(CLI::IsMember({"euler-zxz", "euler-zyz", "svd", "pauli", "mostow-synth"}));

  auto* low = app.add_subcommand("lower", "Compile a gate or fan-in block to a device netlist");
  low->add_option("gate", cfg.inputs, "Gate or fan-in JSON file")->required();
  low->add_option("--arch", cfg.arch, "Target architecture")
      ->check(CLI::IsMember({"zxz", "zyz", "svd", "mostow", "pauli", "fanin"}));
  low->add_option("--control-setting", cfg.control_setting, "Control bits, most significant first");

  for (auto* sub : {dec, low}) {
    sub->add_option("--a", cfg.a, "Antisymmetric parameter for Mostow synthesis");
    sub->add_option("--b", b_spec, "Symmetric B as p,q,r for Mostow synthesis");
  }

  auto* ana = app.add_subcommand("analyze", "Reciprocity and forward-backward symmetry report");
  ana->add_option("netlist", cfg.inputs, "Netlist text file")->required();

  auto* mea = app.add_subcommand("measure", "Coherent or differential receiver model");
  mea->add_option("state", cfg.inputs, "State JSON file")->required();
  mea->add_option("--kind", cfg.kind)->check(CLI::IsMember({"coherent", "differential"}));
  mea->add_option("--responsivity", cfg.responsivity)->required();
  mea->add_option("--omega-c", cfg.omega_c, "Carrier angular frequency, rad/s");

  auto* tra = app.add_subcommand("trajectory", "Bloch-sphere trajectory as CSV");
  tra->add_option("sweep", cfg.inputs, "Sweep spec JSON file")->required();

  for (auto* sub : {sim, dec, low, ana, mea, tra}) {
    sub->add_option("--out", cfg.output, "Write the result to a file");
    sub->add_option("--tol", cfg.tol, "Gate classification tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << apc::json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command == "lower" && cfg.arch.empty() && cfg.control_setting.empty()) cfg.arch = "zxz";
  if (!b_spec.empty()) {
    std::array<double, 3> b{};
    std::size_t pos = 0;
    try {
      for (int i = 0; i < 3; ++i) {
        std::size_t used = 0;
        b[static_cast<std::size_t>(i)] = std::stod(b_spec.substr(pos), &used);
        pos += used;
        if (i < 2) {
          if (pos >= b_spec.size() || b_spec[pos] != ',') throw std::invalid_argument("b");
          ++pos;
        }
      }
      if (pos != b_spec.size()) throw std::invalid_argument("b");
    } catch (const std::exception&) {
      std::cerr << apc::json{{"error", "ParseError"}, {"message", "--b expects p,q,r"}}.dump() << "\n";
      return 2;
    }
    cfg.b = b;
  }
  return apc::run(cfg, std::cout, std::cerr);
}
