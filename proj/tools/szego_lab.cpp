#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "szego/core.hpp"
#include "szego/lab.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  using namespace szego;
  CLI::App app{"Szego kernel lab on weighted CR spheres"};
  app.require_subcommand(1);

  lab::RunConfig cfg;
  std::string k_list;
  std::string seed_text;
  const std::map<std::string, std::string> about{
      {"dims", "dimensions of the degree-k Hardy spaces"},
      {"stratify", "isotropy strata, ell0 and p"},
      {"levi", "Levi form data at a point"},
      {"geom-integral", "integral of |det L| over the sphere"},
      {"integrate-orbifold", "orbifold integral in two atlases"},
      {"kernel-diag", "diagonal kernel series and leading coefficient fit"},
      {"kernel-offdiag", "off-diagonal decay rate"},
      {"stratum", "Fourier selection at singular strata"},
      {"quotient-avg", "cyclic quotient kernel two ways"},
      {"calibrate", "normalization constant on the round sphere"},
      {"embed", "Kodaira map injectivity and immersion sweep"},
      {"reduce", "invariant vs reduced dimensions"},
      {"sigma", "singular values of the reduction map"},
      {"suite", "full acceptance battery"},
  };
  for (const auto& name : lab::commands()) {
    auto* sub = app.add_subcommand(name, about.count(name) ? about.at(name) : std::string());
    sub->add_option("--weights", cfg.weights, "comma-separated positive integers, e.g. 1,2");
    sub->add_option("--k-max", cfg.k_max, "largest degree (embed: largest multiple K)");
    sub->add_option("--k-list", k_list, "degrees as 10,20,30 or start:stop:step");
    sub->add_option("--samples", cfg.samples, "sample, pair, point or node count");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--tol", cfg.tol, "verdict tolerance");
    sub->add_option("--out", cfg.out, "JSON report path (stdout if omitted)");
    sub->add_option("--csv", cfg.csv, "CSV series path (k,value,fit,residual)");
    sub->add_flag("--quick", cfg.quick, "reduced sample counts");
    sub->add_flag("--timing", cfg.timing, "record wall time in the report");
    sub->add_option("--n", cfg.n, "complex dimension of the round sphere");
    sub->add_option("--m", cfg.m, "cyclic group order");
    sub->add_option("--action", cfg.action, "cyclic action weights");
    sub->add_option("--b", cfg.b, "auxiliary circle weights, e.g. 1,-1,0");
    sub->add_option("--metric", cfg.metric, "sphere_measure | euclidean | euclidean_unit_dz");
    sub->add_option("--quadrature", cfg.quadrature, "montecarlo | product1d");
  }
  app.footer("Threads: set SZEGO_THREADS to override the worker count.\n"
             "Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 acceptance FAIL.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (!k_list.empty()) cfg.k_list = lab::parse_k_list(k_list);
    const auto report = lab::run(cfg);
    const auto text = report.json_text();
    if (cfg.out) lab::write_atomic(*cfg.out, text);
    else std::cout << text;
    if (cfg.csv) lab::write_atomic(*cfg.csv, report.csv_text());
    for (const auto& v : report.verdicts) std::cerr << lab::verdict_line(v) << '\n';
    return lab::exit_code(report);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::numerical ? kExitNumerical : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
