// spincontact: command-line front end for the contact-interaction library.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spincontact/cli/commands.hpp"

namespace sc = spincontact;
namespace cli = spincontact::cli;

int main(int argc, char** argv) {
  CLI::App app{"Spin-dependent contact interactions: Yang-Baxter checks, bound states, S-matrices"};
  app.require_subcommand(1);

  std::string model_path;
  std::optional<std::uint64_t> seed;
  double tol = 1e-10;
  int jobs = 1;
  std::string format = "text";
  std::string momenta;
  std::string element;
  std::string grid;
  std::optional<std::size_t> random_count;
  std::string clusters;
  std::size_t samples = 50;
  bool separated = false;
  int gen_n = 2, gen_N = 3;
  std::string gen_stats = "fermion";

  auto common = [&](CLI::App* sub, bool needs_model = true) {
    auto* m = sub->add_option("--model", model_path, "Model file");
    if (needs_model) m->required();
    sub->add_option("--seed", seed, "PRNG seed (overrides the model file)");
    sub->add_option("--tol", tol, "Verdict threshold")->capture_default_str();
    sub->add_option("--jobs", jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"text", "kv"}))
        ->capture_default_str();
  };

  auto* ybe = app.add_subcommand("ybe-check", "Spectral Yang-Baxter residuals over momentum triples");
  common(ybe);
  ybe->add_option("--momenta", momenta, "Explicit triple k1,k2,k3");
  ybe->add_option("--grid", grid, "Cubic grid lo:hi:m");
  ybe->add_option("--random", random_count, "Number of random real triples (default 100)");

  auto* bound = app.add_subcommand("bound-spectrum", "Bound-state strings and energies");
  common(bound);
  bound->add_option("--samples", samples, "Hyperplane samples per pair")->capture_default_str();

  auto* smat = app.add_subcommand("smatrix", "Factorized scattering matrix");
  common(smat);
  smat->add_option("--momenta", momenta, "Increasing real momenta k1,...,kN");
  smat->add_option("--element", element, "Matrix element in:out, e.g. 12:21");

  auto* cluster = app.add_subcommand("cluster-smatrix", "Scattering matrix between two clusters");
  common(cluster);
  cluster->add_option("--clusters", clusters, "Partition such as 12|345")->required();
  cluster->add_option("--momenta", momenta, "Momenta, complex allowed (0.5+1.2i)");
  cluster->add_option("--element", element, "Matrix element in:out");

  auto* wave = app.add_subcommand("wavefunction-verify", "Bethe wavefunction boundary residuals");
  common(wave);
  wave->add_option("--momenta", momenta, "Momenta k1,...,kN");
  wave->add_option("--samples", samples, "Transverse samples per hyperplane")->capture_default_str();
  wave->add_flag("--separated", separated, "Use the separated G conditions");

  auto* bcv = app.add_subcommand("bc-validate", "Check the self-adjointness conditions of a BC");
  common(bcv);

  auto* gen = app.add_subcommand("model-gen", "Emit a random swap-commuting model file");
  gen->add_option("--n", gen_n, "Spin dimension")->capture_default_str();
  gen->add_option("--N", gen_N, "Particle number")->capture_default_str();
  gen->add_option("--statistics", gen_stats, "boson or fermion")
      ->check(CLI::IsMember({"boson", "fermion"}))
      ->capture_default_str();
  gen->add_option("--seed", seed, "PRNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      std::cout << cli::generate_model(gen_n, gen_N,
                                       gen_stats == "boson" ? sc::Statistics::Boson
                                                            : sc::Statistics::Fermion,
                                       seed.value_or(1));
      return 0;
    }

    const cli::ModelFile model = cli::load_model(model_path);
    cli::CommonOptions base;
    base.seed = seed;
    base.tol = tol;
    base.jobs = jobs;
    const auto ks = momenta.empty() ? std::vector<sc::Complex>{} : cli::parse_momenta(momenta);

    std::optional<cli::Report> rep;
    if (ybe->parsed()) {
      cli::YbeCheckOptions o;
      static_cast<cli::CommonOptions&>(o) = base;
      if (!momenta.empty()) o.triple = ks;
      if (!grid.empty()) o.grid = cli::parse_grid(grid);
      o.random_count = random_count;
      rep = cli::cmd_ybe_check(model, o);
    } else if (bound->parsed()) {
      cli::BoundSpectrumOptions o;
      static_cast<cli::CommonOptions&>(o) = base;
      o.samples = samples;
      rep = cli::cmd_bound_spectrum(model, o);
    } else if (smat->parsed()) {
      cli::SMatrixOptions o;
      static_cast<cli::CommonOptions&>(o) = base;
      o.momenta = ks;
      if (!element.empty()) o.element = element;
      rep = cli::cmd_smatrix(model, o);
    } else if (cluster->parsed()) {
      cli::ClusterSMatrixOptions o;
      static_cast<cli::CommonOptions&>(o) = base;
      o.clusters = clusters;
      o.momenta = ks;
      if (!element.empty()) o.element = element;
      rep = cli::cmd_cluster_smatrix(model, o);
    } else if (wave->parsed()) {
      cli::WavefunctionOptions o;
      static_cast<cli::CommonOptions&>(o) = base;
      o.momenta = ks;
      o.samples = samples;
      o.separated = separated;
      rep = cli::cmd_wavefunction_verify(model, o);
    } else if (bcv->parsed()) {
      rep = cli::cmd_bc_validate(model, base);
    }
    rep->write(std::cout, format == "kv" ? cli::ReportFormat::KeyValue : cli::ReportFormat::Text);
    return rep->exit_code();
  } catch (const sc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const sc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
