// diffwave: damped p-system runs, sweeps and diffusion-wave export.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "diffwave/errors.hpp"
#include "diffwave/experiment.hpp"
#include "diffwave/selfcheck.hpp"
#include "diffwave/simd/kernels.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalAbort = 3;

std::vector<double> parse_lambdas(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw diffwave::ConfigError("--lambdas: '" + item + "' is not a number");
    }
  }
  return out;
}

void print_report(const diffwave::ExperimentResult& r) {
  std::printf("regime %s  branch %s  lambda %g  steps %zu\n", diffwave::to_string(r.report.regime),
              r.report.branch.c_str(), r.report.lambda, r.steps);
  for (const auto& e : r.report.exponents) {
    if (!e.error.empty()) {
      std::printf("  %-14s fit failed: %s\n", e.quantity.c_str(), e.error.c_str());
      continue;
    }
    std::printf("  %-14s fitted %.4f (R2 %.4f)", e.quantity.c_str(), e.fit.exponent, e.fit.r2);
    if (e.predicted) std::printf("  predicted %.4f", *e.predicted);
    if (e.pass) std::printf("  %s", *e.pass ? "PASS" : "FAIL");
    std::printf("\n");
  }
  int bad = 0;
  for (const auto& f : r.report.functionals) bad += f.check.pass ? 0 : 1;
  std::printf("  weighted functionals: %zu checked, %d growing\n", r.report.functionals.size(), bad);
  std::printf("  output: %s\n", r.directory.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damped p-system on the half-line: diffusion waves and decay rates"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();

  std::string lambdas_text;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run one experiment per lambda");
  sweep->add_option("config", config_path, "Template config (JSON)")->required();
  sweep->add_option("--lambdas", lambdas_text, "Comma-separated lambda values")->required();
  sweep->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* wave = app.add_subcommand("wave", "Build and export the diffusion wave only");
  wave->add_option("config", config_path, "Experiment config (JSON)")->required();

  auto* check = app.add_subcommand("check", "Analytic-identity self-test");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      bool ok = true;
      std::printf("kernel backend: %s\n", diffwave::simd::active().name);
      for (const auto& c : diffwave::run_identity_checks()) {
        std::printf("%s  %-52s %.3e (limit %.1e)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.measured, c.limit);
        ok = ok && c.pass;
      }
      return ok ? kOk : kNumericalAbort;
    }

    const auto config = diffwave::parse_config_file(config_path);
    const auto dir = diffwave::output_root() / config.output_dir;

    if (*run) {
      const auto result = diffwave::run_experiment(config, dir);
      print_report(result);
      return kOk;
    }
    if (*sweep) {
      const auto entries = diffwave::sweep(config, parse_lambdas(lambdas_text), jobs, dir);
      for (const auto& e : entries) {
        if (e.ok) {
          print_report(*e.result);
        } else {
          std::printf("lambda %g failed: %s\n", e.lambda, e.error.c_str());
        }
      }
      std::printf("sweep table: %s\n", (dir / "sweep.csv").string().c_str());
      return kOk;
    }
    if (*wave) {
      const auto profile = diffwave::build_wave(config);
      const auto path = dir / "wave_profile.txt";
      diffwave::save_profile(path, profile);
      std::printf("%s wave written to %s\n", diffwave::to_string(profile.regime()), path.string().c_str());
      return kOk;
    }
  } catch (const diffwave::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const diffwave::NumericalError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return kNumericalAbort;
  } catch (const diffwave::DomainError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return kNumericalAbort;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kOk;
}
