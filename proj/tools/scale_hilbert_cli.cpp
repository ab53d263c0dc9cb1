// scale-hilbert: command-line front end.
//
//   scale-hilbert --command sobolev-demo    --nu-max 16 --k-max 2 --output demo.json
//   scale-hilbert --command hessian-analyze --input op.json --output report.json
//   scale-hilbert --command ladder          --ladder 64,256,1024 --pair sobolev-sigma
//   scale-hilbert --command verify-all      --seed 20240611
//
// Exit codes: 0 every certificate passed, 1 some certificate failed, 2 bad input.

#include "scale_hilbert/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace sh = scale_hilbert;

namespace {

std::vector<sh::Index> parse_ladder(const std::string& text) {
  std::vector<sh::Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const long long v = std::stoll(item, &used);
    if (used != item.size()) throw std::invalid_argument("malformed ladder entry \"" + item + "\"");
    out.push_back(static_cast<sh::Index>(v));
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated scale Hilbert spaces and scale Hessian certificates"};

  const std::map<std::string, sh::Command> commands{{"sobolev-demo", sh::Command::sobolev_demo},
                                                    {"hessian-analyze", sh::Command::hessian_analyze},
                                                    {"ladder", sh::Command::ladder},
                                                    {"verify-all", sh::Command::verify_all}};
  sh::RunConfig cfg;
  std::string ladder_text;
  double tol = 0.0;

  app.add_option("--command", cfg.command, "sobolev-demo | hessian-analyze | ladder | verify-all")
      ->required()
      ->transform(CLI::CheckedTransformer(commands, CLI::ignore_case));
  app.add_option("--n,--nu-max", cfg.n, "Dimension, or number of Fourier modes for sobolev-demo")
      ->check(CLI::PositiveNumber);
  app.add_option("--k-max", cfg.k_max, "Highest grade")->check(CLI::NonNegativeNumber);
  auto* tol_opt = app.add_option("--tol", tol, "Tolerance replacing every pinned threshold")->check(CLI::PositiveNumber);
  app.add_option("--input", cfg.input_path, "Operator JSON for hessian-analyze");
  app.add_option("--output", cfg.output_path, "Report path (JSON); a CSV mirror is written next to it");
  app.add_option("--seed", cfg.seed, "Seed for randomized instances");
  app.add_option("--ladder", ladder_text, "Comma-separated increasing dimensions, e.g. 64,256,1024");
  app.add_option("--pair", cfg.pair, "Ladder subject: sobolev-sigma | identical | weight-square");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sh::exit_input_error;
  }

  try {
    if (tol_opt->count() > 0) {
      cfg.tol = tol;
    } else {
      cfg.tol = sh::tolerance_from_env();
    }
    if (!ladder_text.empty()) cfg.ladder = parse_ladder(ladder_text);

    const sh::CommandResult result = sh::run_command(cfg);
    const std::string report = result.report.dump(2) + "\n";
    if (cfg.output_path.empty()) {
      std::cout << report;
    } else {
      const std::filesystem::path path(cfg.output_path);
      write_file(path, report);
      if (!result.csv.empty()) {
        std::filesystem::path csv_path = path;
        csv_path.replace_extension(".csv");
        write_file(csv_path, result.csv);
      }
    }
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sh::exit_input_error;
  }
}
