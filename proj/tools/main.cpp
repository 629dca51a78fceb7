#include "clicore.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"exact computations on tropical moduli of rational curves"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string out_path;
  int threads = 1;
  int n = 0;
  int codim = 0;
  int psi_i = 0;
  int psi_nat = 0;
  bool verbose = false;
  std::string vital_spec, sum_spec, divisor_spec, degree_spec, version, type_spec;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    sub->add_option("--out", out_path, "write the report to this file instead of stdout");
    sub->add_option("--threads", threads, "upper bound on worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };

  auto* sk = app.add_subcommand("skeleton-check", "build a skeleton and verify it balances");
  sk->add_option("--n", n, "number of markings")->required();
  sk->add_option("--codim", codim, "codimension of the skeleton")->required();
  auto* sk_psi = sk->add_option("--psi", psi_i, "use the skeleton of this marking's psi-class");
  sk->add_flag("--verbose", verbose, "also print the coordinate totals of the summed rays");
  add_common(sk);

  auto* dv = app.add_subcommand("divisor", "build a named divisor and list its weighted cones");
  dv->add_option("--n", n, "number of markings")->required();
  auto* dv_vital = dv->add_option("--vital", vital_spec, "labels of the defining split, e.g. 1,2");
  auto* dv_psi = dv->add_option("--psi", psi_i, "psi-class of this marking");
  auto* dv_nat =
      dv->add_option("--psi-natural", psi_nat, "one-skeleton minus psi-class for this marking");
  auto* dv_sum = dv->add_option("--sum", sum_spec, "sum of divisor terms, e.g. psi:1+psi:2");
  add_common(dv);

  auto* ir = app.add_subcommand("irreducible", "decide irreducibility of a named divisor");
  ir->add_option("--n", n, "number of markings")->required();
  ir->add_option("--divisor", divisor_spec, "psi:i | vital:a,b,... | psi-skeleton:i,codim:k")
      ->required();
  add_common(ir);

  auto* spx =
      app.add_subcommand("special", "image cells of the extra-marking evaluation pushforward");
  spx->add_option("--degree", degree_spec, "d:<k> or explicit directions a,b;c,d;...")->required();
  spx->add_option("--version", version, "which codimension-one cycle to push forward")
      ->required()
      ->check(CLI::IsMember({"v1", "v2"}));
  add_common(spx);

  auto* mu = app.add_subcommand("mult", "multiplicity of one codimension-one type, both ways");
  mu->add_option("--degree", degree_spec, "d:<k> or explicit directions a,b;c,d;...")->required();
  mu->add_option("--type", type_spec, "splits of the type, e.g. 1,3 or 1,4;2,5")->required();
  add_common(mu);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  tropmod::cli::Outcome outcome;
  try {
    if (*sk) {
      const std::optional<int> psi_opt =
          sk_psi->count() ? std::optional<int>(psi_i) : std::nullopt;
      outcome = tropmod::cli::run_skeleton_check(n, codim, psi_opt, verbose);
    } else if (*dv) {
      const int picked = (dv_vital->count() > 0) + (dv_psi->count() > 0) +
                         (dv_nat->count() > 0) + (dv_sum->count() > 0);
      if (picked != 1)
        throw std::invalid_argument(
            "divisor: pass exactly one of --vital, --psi, --psi-natural, --sum");
      std::string spec;
      if (dv_vital->count())
        spec = "vital:" + vital_spec;
      else if (dv_psi->count())
        spec = "psi:" + std::to_string(psi_i);
      else if (dv_nat->count())
        spec = "psi-natural:" + std::to_string(psi_nat);
      else
        spec = sum_spec;
      outcome = tropmod::cli::run_divisor(n, spec);
    } else if (*ir) {
      outcome = tropmod::cli::run_irreducible(n, divisor_spec);
    } else if (*spx) {
      outcome = tropmod::cli::run_special(degree_spec, version);
    } else {
      outcome = tropmod::cli::run_mult(degree_spec, type_spec);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }

  (void)threads;  // accepted cap; every pipeline here runs on a single worker

  const std::string rendered =
      format == "json" ? tropmod::cli::render_json(outcome) : tropmod::cli::render_text(outcome);
  if (!out_path.empty()) {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open --out file '" << out_path << "'\n";
      return 2;
    }
    file << rendered;
    file.flush();
    if (!file.good()) {
      std::cerr << "error: failed writing to '" << out_path << "'\n";
      return 3;
    }
  } else {
    std::cout << rendered;
  }
  return outcome.exit_code;
}
