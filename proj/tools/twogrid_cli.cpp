// Command-line driver for the two-grid Navier-Stokes experiments.
//
//   twogrid converge   [--pairs 6:20,8:26,...] [--nu] [--t-final] [--dt] [--out]
//   twogrid compare    [--nu] [--coarse] [--fine] [--dump-grid] [--out]
//   twogrid stokes-mms [--family mini|taylor-hood] [--levels 8,16,32] [--oseen]
//   twogrid selftest
//   twogrid mesh       --n N [--matrices DIR --family mini|taylor-hood]
//
// Every subcommand accepts --config FILE with "key = value" lines naming
// long options; explicit flags take precedence.

#include "twogrid/assembly.hpp"
#include "twogrid/exceptions.hpp"
#include "twogrid/experiments.hpp"
#include "twogrid/field_io.hpp"
#include "twogrid/mesh.hpp"
#include "twogrid/selftest.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitThreshold = 3;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Turns "key = value" lines into "--key value" arguments.
std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  std::vector<std::string> args;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--config", "expected key = value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value == "true" || value == "false") {
      if (value == "true") args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

// argv with config-file arguments spliced in right after the subcommand so
// that explicit flags (parsed later) win.
std::vector<std::string> expand_arguments(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      config = args[k + 1];
      args.erase(args.begin() + k, args.begin() + k + 2);
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      config = args[k].substr(9);
      args.erase(args.begin() + k);
      break;
    }
  }
  if (!config.empty() && !args.empty()) {
    const auto extra = config_arguments(config);
    args.insert(args.begin() + 1, extra.begin(), extra.end());
  }
  return args;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--pairs", "expected H:h, got " + item);
    const int coarse = std::stoi(item.substr(0, colon));
    const int fine = std::stoi(item.substr(colon + 1));
    if (coarse < 1 || fine < 1) throw CLI::ValidationError("--pairs", "subdivisions must be >= 1");
    pairs.emplace_back(coarse, fine);
  }
  if (pairs.empty()) throw CLI::ValidationError("--pairs", "no pairs given");
  return pairs;
}

void print_report_table(const std::vector<twogrid::ErrorReport>& reports) {
  std::printf("%-16s %6s %6s %12s %12s %12s %12s %12s\n", "method", "1/H", "1/h", "u L2", "u H1",
              "p L2", "u1 L2", "u1 H1");
  for (const auto& r : reports) {
    std::printf("%-16s %6.0f %6.0f %12.4e %12.4e %12.4e %12.4e %12.4e\n", r.method.c_str(), 1.0 / r.H,
                1.0 / r.h, r.err_u_L2, r.err_u_H1, r.err_p_L2, r.err_u1_L2, r.err_u1_H1);
  }
}

void print_slopes(const twogrid::SlopeTable& slopes) {
  std::printf("convergence orders (least squares vs H):\n");
  for (const auto& [key, value] : slopes.values) std::printf("  %-22s %7.3f\n", key.c_str(), value);
}

void write_file(const std::string& path, const auto& writer) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  writer(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-grid mixed finite elements for 2D incompressible Navier-Stokes"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("--config", config_path, "key = value file overriding defaults");

  twogrid::ConvergenceConfig conv;
  std::string pairs_text = "6:20,8:26,10:32,12:36";
  std::string conv_out = "errors.csv";
  std::string conv_series;
  auto* converge = app.add_subcommand("converge", "manufactured-solution two-grid convergence study");
  converge->add_option("--pairs", pairs_text, "coarse:fine subdivision pairs");
  converge->add_option("--nu", conv.nu, "viscosity")->check(CLI::PositiveNumber);
  converge->add_option("--t-final", conv.t_final, "final time")->check(CLI::PositiveNumber);
  converge->add_option("--dt", conv.dt, "time step")->check(CLI::PositiveNumber);
  converge->add_option("--out", conv_out, "errors CSV");
  converge->add_option("--time-series", conv_series, "prefix for per-level step CSVs");

  twogrid::CompareConfig cmp;
  std::string cmp_out = "compare.csv";
  std::string dump_dir;
  auto* compare = app.add_subcommand("compare", "Galerkin vs standard vs new postprocess (vortex)");
  compare->add_option("--nu", cmp.nu, "viscosity")->check(CLI::PositiveNumber);
  compare->add_option("--coarse", cmp.coarse, "coarse subdivisions")->check(CLI::PositiveNumber);
  compare->add_option("--fine", cmp.fine, "fine subdivisions")->check(CLI::PositiveNumber);
  compare->add_option("--t-final", cmp.t_final, "final time")->check(CLI::PositiveNumber);
  compare->add_option("--dt", cmp.dt, "coarse time step")->check(CLI::PositiveNumber);
  compare->add_option("--dump-grid", cmp.dump_grid, "samples per direction for field dumps (0: none)")
      ->check(CLI::NonNegativeNumber);
  compare->add_option("--oracle-n", cmp.oracle_n, "reference subdivisions")->check(CLI::PositiveNumber);
  compare->add_option("--oracle-dt", cmp.oracle_dt, "reference time step")->check(CLI::PositiveNumber);
  compare->add_option("--adequacy-n", cmp.adequacy_n, "second reference resolution (0: skip)")
      ->check(CLI::NonNegativeNumber);
  compare->add_option("--cache-dir", cmp.cache_dir, "reference cache directory");
  compare->add_option("--out", cmp_out, "errors CSV");
  compare->add_option("--dump-dir", dump_dir, "directory for grid dumps (default: next to --out)");

  twogrid::StokesMmsConfig mms;
  std::string family_text = "mini";
  std::string levels_text = "8,16,32";
  std::string mms_out;
  auto* stokes = app.add_subcommand("stokes-mms", "steady Stokes/Oseen manufactured convergence");
  stokes->add_option("--family", family_text, "mini or taylor-hood")
      ->check(CLI::IsMember({"mini", "taylor-hood"}));
  stokes->add_option("--levels", levels_text, "comma-separated subdivisions");
  stokes->add_option("--nu", mms.nu, "viscosity")->check(CLI::PositiveNumber);
  stokes->add_flag("--oseen", mms.oseen, "add convection by the exact velocity");
  stokes->add_option("--out", mms_out, "errors CSV");

  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");

  int mesh_n = 2;
  auto* mesh_cmd = app.add_subcommand("mesh", "print the structured mesh");
  mesh_cmd->add_option("--n", mesh_n, "subdivisions")->check(CLI::PositiveNumber);
  std::string matrix_dir;
  std::string matrix_family = "mini";
  mesh_cmd->add_option("--matrices", matrix_dir, "also write M, K, B as 'i j value' files here");
  mesh_cmd->add_option("--family", matrix_family, "element pair for --matrices")
      ->check(CLI::IsMember({"mini", "taylor-hood"}));

  std::vector<std::string> args;
  try {
    args = expand_arguments(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*converge) {
      conv.pairs = parse_pairs(pairs_text);
      const auto result = twogrid::run_experiment1(conv);
      write_file(conv_out, [&](std::ostream& os) { twogrid::write_errors_csv(os, result.reports); });
      if (!conv_series.empty()) {
        for (const auto& level : result.levels) {
          write_file(conv_series + "_H" + std::to_string(level.coarse) + ".csv",
                     [&](std::ostream& os) { twogrid::write_time_series_csv(os, level.history); });
        }
      }
      print_report_table(result.reports);
      print_slopes(result.slopes);
    } else if (*compare) {
      const auto result = twogrid::run_experiment2(cmp);
      write_file(cmp_out, [&](std::ostream& os) { twogrid::write_errors_csv(os, result.reports); });
      print_report_table(result.reports);
      std::printf("midline total variation of u1:\n");
      for (const auto& [method, tv] : result.midline_tv) std::printf("  %-16s %.6e\n", method.c_str(), tv);
      if (result.oracle_difference_H1 >= 0.0) {
        std::printf("reference resolution difference (H1): %.6e\n", result.oracle_difference_H1);
      }
      if (cmp.dump_grid > 0) {
        const std::filesystem::path dir =
            dump_dir.empty() ? std::filesystem::path(cmp_out).parent_path() : std::filesystem::path(dump_dir);
        if (!dir.empty()) std::filesystem::create_directories(dir);
        for (const auto& [method, field] : result.velocity_fields) {
          write_file((dir / ("velocity_" + method + ".csv")).string(), [&](std::ostream& os) {
            twogrid::write_velocity_grid_csv(os, field, cmp.dump_grid);
          });
        }
        for (const auto& [method, field] : result.pressure_fields) {
          write_file((dir / ("pressure_" + method + ".csv")).string(), [&](std::ostream& os) {
            twogrid::write_pressure_grid_csv(os, field, cmp.dump_grid);
          });
        }
      }
    } else if (*stokes) {
      mms.family = family_text == "mini" ? twogrid::Family::Mini : twogrid::Family::TaylorHood;
      mms.levels.clear();
      std::stringstream ss(levels_text);
      std::string item;
      while (std::getline(ss, item, ',')) mms.levels.push_back(std::stoi(item));
      const auto result = twogrid::run_stokes_mms(mms);
      if (!mms_out.empty()) {
        write_file(mms_out, [&](std::ostream& os) { twogrid::write_errors_csv(os, result.reports); });
      }
      print_report_table(result.reports);
      print_slopes(result.slopes);
    } else if (*selftest) {
      return twogrid::run_selftest(std::cout) ? kExitOk : kExitThreshold;
    } else if (*mesh_cmd) {
      twogrid::write_mesh(std::cout, twogrid::build_unit_square_mesh(mesh_n));
      if (!matrix_dir.empty()) {
        const auto family = matrix_family == "mini" ? twogrid::Family::Mini : twogrid::Family::TaylorHood;
        const auto ops = twogrid::assemble_operators(*twogrid::build_space(mesh_n, family));
        const std::filesystem::path dir(matrix_dir);
        for (const auto& [name, matrix] : {std::pair{"M", &ops.M}, {"K", &ops.K}, {"B", &ops.B}}) {
          write_file((dir / (std::string(name) + ".txt")).string(),
                     [&](std::ostream& os) { twogrid::write_matrix_coordinates(os, *matrix); });
        }
      }
    }
  } catch (const twogrid::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
