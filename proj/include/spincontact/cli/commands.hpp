#pragma once

// Subcommands behind the spincontact tool. Each returns a Report; input
// problems surface as ParseError / ValidationError and map to exit code 2.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "spincontact/cli/model_file.hpp"
#include "spincontact/cli/report.hpp"
#include "spincontact/spincontact.hpp"

namespace spincontact::cli {

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  double tol = 1e-10;
  int jobs = 1;
};

inline std::uint64_t effective_seed(const ModelFile& m, const CommonOptions& o) {
  if (o.seed) return *o.seed;
  if (m.seed) return *m.seed;
  return 1;
}

/// "1.5", "-2i", "i", "0.5+1.2i", "1e-3-4e-1i".
inline Complex parse_complex_literal(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (ch != ' ' && ch != '\t') s += ch;
  if (s.empty()) throw ValidationError("empty momentum");
  auto number = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw ValidationError("bad momentum '" + raw + "'");
    }
    if (used != t.size()) throw ValidationError("bad momentum '" + raw + "'");
    return v;
  };
  if (s.back() != 'i') return {number(s), 0.0};
  s.pop_back();
  // Split at the last sign that is not an exponent sign or the leading one.
  std::size_t split = std::string::npos;
  for (std::size_t p = s.size(); p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, number(s)};
  return {number(s.substr(0, split)), number(s.substr(split))};
}

inline std::vector<Complex> parse_momenta(const std::string& list) {
  std::vector<Complex> out;
  std::size_t b = 0;
  while (b <= list.size()) {
    const auto e = list.find(',', b);
    const std::string tok = list.substr(b, e == std::string::npos ? std::string::npos : e - b);
    out.push_back(parse_complex_literal(tok));
    if (e == std::string::npos) break;
    b = e + 1;
  }
  return out;
}

inline std::string format_momenta(const MomentumSet& ks) {
  std::string s;
  for (std::size_t a = 0; a < ks.size(); ++a) {
    if (a) s += ',';
    s += Report::format(ks[a]);
  }
  return s;
}

/// Spin labels "121" -> {1,2,1}.
inline MultiIndex parse_spins(const std::string& s, const SpinConfig& cfg) {
  if (s.size() != static_cast<std::size_t>(cfg.particles()))
    throw ValidationError("spin label '" + s + "' must have N = " +
                          std::to_string(cfg.particles()) + " digits");
  MultiIndex idx;
  for (char ch : s) {
    if (ch < '1' || ch > '9') throw ValidationError("spin label '" + s + "' must be digits 1..n");
    idx.components.push_back(ch - '0');
  }
  return idx;
}

/// "12|345" -> {{1,2},{3,4,5}}.
inline ClusterAssignment parse_clusters(const std::string& s) {
  const auto bar = s.find('|');
  if (bar == std::string::npos || s.find('|', bar + 1) != std::string::npos)
    throw ValidationError("clusters must look like '12|345'");
  ClusterAssignment c;
  auto fill = [&](const std::string& part, std::vector<int>& out) {
    for (char ch : part) {
      if (ch < '1' || ch > '9') throw ValidationError("cluster labels must be digits 1..9");
      out.push_back(ch - '0');
    }
  };
  fill(s.substr(0, bar), c.first);
  fill(s.substr(bar + 1), c.second);
  if (c.first.empty() || c.second.empty()) throw ValidationError("clusters must be non-empty");
  return c;
}

/// Seeded strictly increasing real momenta in [-2, 2).
inline MomentumSet random_increasing_momenta(Xoshiro256& rng, int count) {
  std::vector<double> k;
  while (static_cast<int>(k.size()) < count) {
    k.clear();
    for (int a = 0; a < count; ++a) k.push_back(rng.uniform(-2.0, 2.0));
    std::sort(k.begin(), k.end());
    for (std::size_t a = 0; a + 1 < k.size(); ++a)
      if (k[a + 1] - k[a] < 1e-3) k.clear();
  }
  return MomentumSet::real(k);
}

namespace detail {

/// Runs task(i) for i in [0, count) over `jobs` threads; results land at index i.
template <typename Result, typename Task>
std::vector<Result> parallel_indexed(std::size_t count, int jobs, Task task) {
  std::vector<Result> out(count);
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) out[i] = task(i);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) out[i] = task(i);
    });
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------- ybe-check

struct Grid {
  double lo = -1.0;
  double hi = 1.0;
  int points = 3;
};

/// "lo:hi:m".
inline Grid parse_grid(const std::string& s) {
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? a : s.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos)
    throw ValidationError("grid must look like 'lo:hi:m'");
  Grid g;
  try {
    g.lo = std::stod(s.substr(0, a));
    g.hi = std::stod(s.substr(a + 1, b - a - 1));
    g.points = std::stoi(s.substr(b + 1));
  } catch (const std::exception&) {
    throw ValidationError("grid must look like 'lo:hi:m'");
  }
  if (g.points < 1 || !(g.lo <= g.hi)) throw ValidationError("grid needs lo <= hi and m >= 1");
  return g;
}

struct YbeCheckOptions : CommonOptions {
  std::optional<std::vector<Complex>> triple;
  std::optional<Grid> grid;
  std::optional<std::size_t> random_count;
};

inline Report cmd_ybe_check(const ModelFile& model, const YbeCheckOptions& opts) {
  Report rep("ybe-check");
  rep.set_digest(model.digest);
  const int N = std::max(3, model.N);
  const SpinConfig cfg = model.config(N);
  const CouplingMatrix h = model.coupling();
  const std::uint64_t seed = effective_seed(model, opts);
  rep.add("n", model.n);
  rep.add("N", N);
  rep.add("statistics", std::string(to_string(model.statistics)));
  rep.add("seed", std::to_string(seed));
  rep.add("tol", opts.tol);
  const CouplingReport cr = validate_coupling(h);
  rep.add("commutator_norm", cr.commutator_residual);

  std::vector<std::array<Complex, 4>> points;
  Xoshiro256 rng(seed);
  auto fourth = [&] { return Complex(rng.uniform(-2.0, 2.0), 0.0); };
  if (opts.triple) {
    if (opts.triple->size() != 3) throw ValidationError("--momenta needs exactly three values");
    const auto& t = *opts.triple;
    points.push_back({t[0], t[1], t[2], fourth()});
  }
  if (opts.grid) {
    const Grid& g = *opts.grid;
    const double step = g.points > 1 ? (g.hi - g.lo) / (g.points - 1) : 0.0;
    for (int a = 0; a < g.points; ++a)
      for (int b = 0; b < g.points; ++b)
        for (int c = 0; c < g.points; ++c)
          points.push_back(
              {g.lo + a * step, g.lo + b * step, g.lo + c * step, fourth()});
  }
  if (opts.random_count || points.empty()) {
    const std::size_t count = opts.random_count.value_or(100);
    for (std::size_t p = 0; p < count; ++p) {
      std::array<Complex, 4> k;
      for (auto& z : k) z = Complex(rng.uniform(-2.0, 2.0), 0.0);
      points.push_back(k);
    }
  }

  struct PointResult {
    bool singular = false;
    double ybe = 0.0, inverse = 0.0, disjoint = 0.0;
  };
  const bool disjoint = N >= 4;
  auto results = detail::parallel_indexed<PointResult>(points.size(), opts.jobs, [&](std::size_t p) {
    PointResult r;
    const auto& k = points[p];
    try {
      r.ybe = ybe_residual(cfg, h, {k[0], k[1], k[2]});
      const MomentumSet ks = disjoint ? MomentumSet{k[0], k[1], k[2], k[3]}
                                      : MomentumSet{k[0], k[1], k[2]};
      for (auto [i, j] : {std::pair{1, 2}, {1, 3}, {2, 3}})
        r.inverse = std::max(r.inverse, ybe_inverse_residual(cfg, h, ks, {i, j}, {1, 2}));
      if (disjoint)
        r.disjoint = ybe_disjoint_residual(cfg, h, ks, {{1, 2}, {1, 2}}, {{3, 4}, {3, 4}});
    } catch (const SingularError&) {
      r.singular = true;
    }
    return r;
  });

  std::size_t evaluated = 0, skipped = 0;
  double max_ybe = 0.0, max_inv = 0.0, max_dis = 0.0;
  for (std::size_t p = 0; p < results.size(); ++p) {
    const auto& r = results[p];
    if (r.singular) {
      ++skipped;
      continue;
    }
    ++evaluated;
    max_ybe = std::max(max_ybe, r.ybe);
    max_inv = std::max(max_inv, r.inverse);
    max_dis = std::max(max_dis, r.disjoint);
  }
  rep.add("points", points.size());
  rep.add("evaluated", evaluated);
  rep.add("skipped_singular", skipped);
  if (skipped) rep.warn(std::to_string(skipped) + " singular momentum points skipped");
  rep.add("max_ybe_residual", max_ybe);
  rep.add("max_inverse_residual", max_inv);
  if (disjoint) rep.add("max_disjoint_residual", max_dis);
  rep.check("evaluated-points", evaluated > 0);
  rep.below("YBE", max_ybe, opts.tol);
  rep.below("YBE-inverse", max_inv, opts.tol);
  if (disjoint) rep.below("YBE-disjoint", max_dis, opts.tol);
  return rep;
}

// ------------------------------------------------------------ bound-spectrum

struct BoundSpectrumOptions : CommonOptions {
  std::size_t samples = 50;
};

inline Report cmd_bound_spectrum(const ModelFile& model, const BoundSpectrumOptions& opts) {
  Report rep("bound-spectrum");
  rep.set_digest(model.digest);
  const SpinConfig cfg = model.config();
  const std::uint64_t seed = effective_seed(model, opts);
  rep.add("n", model.n);
  rep.add("N", model.N);
  rep.add("statistics", std::string(to_string(model.statistics)));
  rep.add("a", model.a);
  rep.add("c", model.c);
  rep.add("seed", std::to_string(seed));
  if (model.N < 2) throw ValidationError("bound-spectrum needs N >= 2");
  Xoshiro256 rng(seed);

  const CouplingMatrix h = model.coupling();
  const auto modes = n_body_bound_states(cfg, h, model.a, model.c);
  // Group basis vectors by Lambda.
  std::vector<std::vector<const BoundStateMode*>> families;
  for (const auto& m : modes) {
    if (families.empty() || families.back().front()->lambda_val != m.lambda_val)
      families.emplace_back();
    families.back().push_back(&m);
  }
  rep.add("delta_families", families.size());
  if (families.empty()) rep.add("delta_modes", "no bound states");
  double worst_cross = 0.0, worst_cont = 0.0, worst_jump = 0.0, worst_inv = 0.0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& fam = families[f];
    const BoundStateMode& m0 = *fam.front();
    const std::string key = "delta." + std::to_string(f + 1) + ".";
    const Complex sumk2 = energy(m0.momenta);
    const double cross = std::abs(sumk2 - Complex(m0.energy));
    double cont = 0.0, jump = 0.0, inv = 0.0;
    for (const BoundStateMode* m : fam) {
      inv = std::max(inv, mode_invariant_residual(cfg, h, *m));
      for (int i = 1; i <= cfg.particles(); ++i)
        for (int j = i + 1; j <= cfg.particles(); ++j) {
          const auto samples = random_pair_samples(rng, cfg.particles(), opts.samples);
          const auto r = bound_state_boundary_residual(cfg, h, *m, i, j, samples);
          cont = std::max(cont, r.continuity_max);
          jump = std::max(jump, r.jump_max);
        }
    }
    rep.add(key + "lambda", m0.lambda_val);
    rep.add(key + "degeneracy", fam.size());
    rep.add(key + "kappa", m0.kappa);
    rep.add(key + "momenta", format_momenta(m0.momenta));
    rep.add(key + "energy", m0.energy);
    rep.add(key + "sum_k2", sumk2);
    rep.add(key + "cross_check", cross);
    rep.add(key + "invariant_residual", inv);
    rep.add(key + "continuity_residual", cont);
    rep.add(key + "jump_residual", jump);
    worst_cross = std::max(worst_cross, cross / std::max(1.0, std::abs(m0.energy)));
    worst_cont = std::max(worst_cont, cont);
    worst_jump = std::max(worst_jump, jump);
    worst_inv = std::max(worst_inv, inv);
  }
  if (!families.empty()) {
    rep.below("energy-cross-check", worst_cross, opts.tol);
    rep.below("eigenvector", worst_inv, opts.tol);
    rep.below("continuity", worst_cont, opts.tol);
    rep.below("jump", worst_jump, opts.tol);
  }

  if (model.has_separated()) {
    const SeparatedModel sep = model.separated();
    const SeparatedSpectrum spec = separated_bound_states(sep, cfg);
    rep.add("separated_states", spec.states.size());
    rep.add("separated_empty_tables", spec.empty_tables.size());
    if (spec.states.empty()) rep.add("separated_modes", "no bound states");
    double worst_minus = 0.0, worst_plus = 0.0, worst_sep_cross = 0.0;
    for (std::size_t s = 0; s < spec.states.size(); ++s) {
      const auto& st = spec.states[s];
      const std::string key = "separated." + std::to_string(s + 1) + ".";
      const Complex sumk2 = energy(st.momenta);
      double minus = 0.0, plus = 0.0;
      for (int i = 1; i <= cfg.particles(); ++i)
        for (int j = i + 1; j <= cfg.particles(); ++j) {
          const auto samples = random_pair_samples(rng, cfg.particles(), opts.samples);
          const auto r = separated_state_boundary_residual(cfg, sep, st, i, j, samples);
          minus = std::max(minus, r.minus_side);
          plus = std::max(plus, r.plus_side);
        }
      rep.add(key + "lambda", st.lambda_val);
      rep.add(key + "signs", st.epsilon.to_string());
      rep.add(key + "degeneracy", static_cast<std::size_t>(st.spin_basis.cols()));
      rep.add(key + "momenta", format_momenta(st.momenta));
      rep.add(key + "energy", st.energy);
      rep.add(key + "sum_k2", sumk2);
      rep.add(key + "minus_side_residual", minus);
      rep.add(key + "plus_side_residual", plus);
      worst_minus = std::max(worst_minus, minus);
      worst_plus = std::max(worst_plus, plus);
      worst_sep_cross = std::max(worst_sep_cross, std::abs(sumk2 - Complex(st.energy)) /
                                                       std::max(1.0, std::abs(st.energy)));
    }
    if (!spec.states.empty()) {
      rep.below("separated-energy-cross-check", worst_sep_cross, opts.tol);
      rep.below("separated-minus-side", worst_minus, opts.tol);
      rep.below("separated-plus-side", worst_plus, opts.tol);
    }
  }
  return rep;
}

// ------------------------------------------------------------------- smatrix

struct SMatrixOptions : CommonOptions {
  std::vector<Complex> momenta;
  std::optional<std::string> element;  ///< "in:out"
};

inline void add_element(Report& rep, const ScatteringMatrix& s, const SpinConfig& cfg,
                        const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ValidationError("--element must look like 'in:out'");
  const std::string in = spec.substr(0, colon), out = spec.substr(colon + 1);
  const Complex z = s_element(s, cfg, parse_spins(out, cfg), parse_spins(in, cfg));
  rep.add("element." + in + ":" + out, z);
  rep.add("element_abs", std::abs(z));
}

inline Report cmd_smatrix(const ModelFile& model, const SMatrixOptions& opts) {
  Report rep("smatrix");
  rep.set_digest(model.digest);
  const SpinConfig cfg = model.config();
  const CouplingMatrix h = model.coupling();
  rep.add("n", model.n);
  rep.add("N", model.N);
  rep.add("statistics", std::string(to_string(model.statistics)));
  MomentumSet ks;
  if (opts.momenta.empty()) {
    Xoshiro256 rng(effective_seed(model, opts));
    ks = random_increasing_momenta(rng, model.N);
  } else {
    ks = MomentumSet(opts.momenta);
  }
  rep.add("momenta", format_momenta(ks));
  const ScatteringMatrix s = scattering_matrix(cfg, h, ks);
  const double unit = unitarity_residual(s);
  rep.add("unitarity_residual", unit);
  rep.add("symmetry_residual", symmetry_residual(s));
  if (opts.element) add_element(rep, s, cfg, *opts.element);
  rep.below("unitarity", unit, opts.tol);
  return rep;
}

// ----------------------------------------------------------- cluster-smatrix

struct ClusterSMatrixOptions : CommonOptions {
  std::string clusters;
  std::vector<Complex> momenta;
  std::optional<std::string> element;
};

inline Report cmd_cluster_smatrix(const ModelFile& model, const ClusterSMatrixOptions& opts) {
  Report rep("cluster-smatrix");
  rep.set_digest(model.digest);
  const SpinConfig cfg = model.config();
  const CouplingMatrix h = model.coupling();
  const ClusterAssignment cl = parse_clusters(opts.clusters);
  MomentumSet ks;
  if (opts.momenta.empty()) {
    Xoshiro256 rng(effective_seed(model, opts));
    ks = random_increasing_momenta(rng, model.N);
  } else {
    ks = MomentumSet(opts.momenta);
  }
  rep.add("n", model.n);
  rep.add("N", model.N);
  rep.add("statistics", std::string(to_string(model.statistics)));
  rep.add("clusters", opts.clusters);
  rep.add("momenta", format_momenta(ks));
  const ScatteringMatrix s = cluster_scattering_matrix(cfg, h, cl, ks);
  const double unit = unitarity_residual(s);
  rep.add("unitarity_residual", unit);
  rep.add("trace", s.matrix.trace());
  rep.add("determinant", s.matrix.determinant());
  if (opts.element) add_element(rep, s, cfg, *opts.element);
  // Unitarity is only expected for real momenta.
  if (ks.is_real()) rep.below("unitarity", unit, opts.tol);
  return rep;
}

// ------------------------------------------------------- wavefunction-verify

struct WavefunctionOptions : CommonOptions {
  std::vector<Complex> momenta;
  std::size_t samples = 50;
  bool separated = false;
};

inline Report cmd_wavefunction_verify(const ModelFile& model, const WavefunctionOptions& opts) {
  Report rep("wavefunction-verify");
  rep.set_digest(model.digest);
  const SpinConfig cfg = model.config();
  const std::uint64_t seed = effective_seed(model, opts);
  Xoshiro256 rng(seed);
  rep.add("n", model.n);
  rep.add("N", model.N);
  rep.add("statistics", std::string(to_string(model.statistics)));
  rep.add("contact", std::string(opts.separated ? "separated" : "delta"));
  rep.add("seed", std::to_string(seed));
  if (model.N < 2) throw ValidationError("wavefunction-verify needs N >= 2");

  const MomentumSet ks =
      opts.momenta.empty() ? random_increasing_momenta(rng, model.N) : MomentumSet(opts.momenta);
  Vector u = model.spin_vector ? *model.spin_vector : random_complex_vector(rng, cfg.rows());
  if (u.size() != cfg.rows())
    throw ValidationError("spin_vector must have n^N = " + std::to_string(cfg.rows()) + " entries");
  rep.add("momenta", format_momenta(ks));

  PropagationOptions po;
  po.inconsistency_tol = opts.tol;
  std::optional<BetheCoefficients> coeffs;
  try {
    coeffs = opts.separated ? propagate_separated(cfg, model.separated(), ks, u, po)
                            : propagate_coefficients(cfg, model.coupling(), ks, u, po);
  } catch (const InconsistencyError& e) {
    rep.add("inconsistent_permutation", e.permutation());
    rep.add("first_parent", e.first_parent());
    rep.add("second_parent", e.second_parent());
    rep.add("path_discrepancy", e.discrepancy());
    rep.below("YBE-path-consistency", e.discrepancy(), opts.tol);
    return rep;
  }
  rep.add("coefficients", coeffs->size());
  rep.add("path_discrepancy", coeffs->max_discrepancy());
  rep.below("YBE-path-consistency", coeffs->max_discrepancy(), opts.tol);

  double worst_a = 0.0, worst_b = 0.0;
  for (int j = 1; j < cfg.particles(); ++j) {
    const auto samples = random_transverse_samples(rng, cfg.particles(), opts.samples);
    const std::string key = "hyperplane." + std::to_string(j) + "," + std::to_string(j + 1) + ".";
    if (opts.separated) {
      const auto r = boundary_residual(*coeffs, j, model.separated(), samples);
      rep.add(key + "minus_side_residual", r.minus_side);
      rep.add(key + "plus_side_residual", r.plus_side);
      worst_a = std::max(worst_a, r.minus_side);
      worst_b = std::max(worst_b, r.plus_side);
    } else {
      const auto r = boundary_residual(*coeffs, j, delta_bc(model.coupling()), samples);
      rep.add(key + "continuity_residual", r.continuity_max);
      rep.add(key + "jump_residual", r.jump_max);
      worst_a = std::max(worst_a, r.continuity_max);
      worst_b = std::max(worst_b, r.jump_max);
    }
  }
  if (opts.separated) {
    rep.below("separated-minus-side", worst_a, opts.tol);
    rep.below("separated-plus-side", worst_b, opts.tol);
  } else {
    rep.below("continuity", worst_a, opts.tol);
    rep.below("jump", worst_b, opts.tol);
  }
  return rep;
}

// --------------------------------------------------------------- bc-validate

inline Report cmd_bc_validate(const ModelFile& model, const CommonOptions& opts) {
  Report rep("bc-validate");
  rep.set_digest(model.digest);
  const std::string kind = model.bc_kind.empty() ? "delta" : model.bc_kind;
  rep.add("bc", kind);
  if (kind == "scalar") {
    if (!model.scalar_bc) throw ValidationError("bc = scalar needs a bc_scalar line");
    const ScalarBC& s = *model.scalar_bc;
    const double det = s.a * s.d - s.b * s.c;
    rep.add("determinant", det);
    rep.below("scalar-determinant", std::abs(det - 1.0), opts.tol);
    return rep;
  }
  auto block = [&](const char* name) -> const Matrix& {
    auto it = model.bc_blocks.find(name);
    if (it == model.bc_blocks.end())
      throw ValidationError(std::string("bc = ") + kind + " needs 'matrix " + name + "'");
    return it->second;
  };
  BlockBC bc;
  if (kind == "delta") {
    const CouplingMatrix h = model.coupling();
    const CouplingReport cr = validate_coupling(h);
    rep.add("hermitian_residual", cr.hermitian_residual);
    rep.add("commutator_norm", cr.commutator_residual);
    bc = delta_bc(h);
  } else if (kind == "bound1") {
    bc = bound1_bc(block("bc_B"));
  } else if (kind == "bound2") {
    bc = bound2_bc(block("bc_B"));
  } else {
    bc = {block("A"), block("B"), block("C"), block("D")};
  }
  const BlockBCReport r = validate_block_bc(bc);
  rep.add("ABCD-1_residual", r.residuals[0]);
  rep.add("ABCD-2_residual", r.residuals[1]);
  rep.add("ABCD-3_residual", r.residuals[2]);
  rep.below("ABCD-1", r.residuals[0], opts.tol);
  rep.below("ABCD-2", r.residuals[1], opts.tol);
  rep.below("ABCD-3", r.residuals[2], opts.tol);
  return rep;
}

}  // namespace spincontact::cli
