#include "cayperc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "cayperc/bounds.hpp"
#include "cayperc/cayley_ball.hpp"
#include "cayperc/cycles.hpp"
#include "cayperc/error.hpp"
#include "cayperc/group.hpp"
#include "cayperc/parallel.hpp"
#include "cayperc/percolation.hpp"
#include "cayperc/spanning_forest.hpp"
#include "cayperc/walk.hpp"

namespace cayperc {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const std::vector<std::string> kNames{"ball",   "walk",         "percolate",  "msf",
                                      "cycles", "bounds",       "pak-smirnova", "relative-pc"};

}  // namespace

const std::vector<std::string>& experiment_names() { return kNames; }

std::vector<std::string> experiment_keys(const std::string& experiment) {
  std::vector<std::string> keys = presentation_keys();
  keys.insert(keys.end(), {"seed", "lazify"});
  std::vector<std::string> extra;
  if (experiment == "ball") {
    extra = {"radius"};
  } else if (experiment == "walk") {
    extra = {"n_max", "method", "arithmetic", "kfold", "tolerance"};
  } else if (experiment == "percolate") {
    extra = {"radius", "p", "p_grid", "trials", "size_floor", "method"};
  } else if (experiment == "msf") {
    extra = {"radius", "radius_grid", "trials"};
  } else if (experiment == "cycles") {
    extra = {"n_max", "radius", "cap"};
  } else if (experiment == "bounds") {
    extra = {"radius", "n_max", "subset_cap", "cycle_n_max", "kfold"};
  } else if (experiment == "pak-smirnova") {
    extra = {"n_max", "margin"};
  } else if (experiment == "relative-pc") {
    extra = {"radius", "p", "trials", "method"};
  }
  keys.insert(keys.end(), extra.begin(), extra.end());
  return keys;
}

namespace {

// Raised while reading the config; maps to exit code 2.
class InvalidConfig : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Params {
  std::string experiment;
  std::optional<GroupPresentation> pres;
  std::uint64_t seed = 1;
  std::size_t radius = 0;
  std::vector<std::size_t> radius_grid;
  double p = 0.0;
  std::vector<double> p_grid;
  std::size_t trials = 0;
  std::size_t size_floor = 0;
  std::size_t subset_cap = 0;
  std::size_t n_max = 0;
  std::size_t cycle_n_max = 0;
  std::optional<int> k;
  std::optional<PcMethod> pc_method;
  SpectralMethod spectral_method = SpectralMethod::PolynomialFit;
  Arithmetic arithmetic = Arithmetic::Double;
  double tolerance = 0.02;
  double margin = kAmenableMargin;
  std::uint64_t cap = kDefaultCycleCap;
};

std::size_t count_key(const KeyValueText& kv, const std::string& key, long long fallback,
                      long long lo, long long hi) {
  const auto v = kv.get_int(key, fallback);
  if (v < lo || v > hi) {
    throw InvalidConfig(fmt::format("`{}` = {} is outside [{}, {}]", key, v, lo, hi));
  }
  return static_cast<std::size_t>(v);
}

double probability_key(const KeyValueText& kv, const std::string& key, double fallback) {
  const auto v = kv.get_double(key, fallback);
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidConfig(fmt::format("`{}` must lie in [0, 1]", key));
  return v;
}

Params parse_params(const std::string& experiment, const KeyValueText& kv,
                    const RunOptions& options) {
  if (std::find(kNames.begin(), kNames.end(), experiment) == kNames.end()) {
    throw InvalidConfig(fmt::format("unknown experiment '{}' (expected one of: {})", experiment,
                                    fmt::join(kNames, ", ")));
  }
  kv.require_known(experiment_keys(experiment));
  Params params;
  params.experiment = experiment;
  auto pres = parse_presentation(kv.subset(presentation_keys()));
  if (kv.get_bool("lazify", false)) pres = lazify(pres);
  params.pres = pres;

  const auto seed = kv.get_int("seed", 1);
  if (seed < 0) throw InvalidConfig("`seed` must be non-negative");
  params.seed = options.seed.value_or(static_cast<std::uint64_t>(seed));

  if (kv.has("kfold")) params.k = static_cast<int>(count_key(kv, "kfold", 1, 1, 64));
  if (kv.has("method")) {
    const auto m = *kv.get("method");
    if (experiment == "walk") {
      if (m == "fit") {
        params.spectral_method = SpectralMethod::PolynomialFit;
      } else if (m == "raw") {
        params.spectral_method = SpectralMethod::RawRoot;
      } else {
        throw InvalidConfig(fmt::format("unknown spectral method '{}' (fit or raw)", m));
      }
    } else {
      params.pc_method = parse_pc_method(m);
    }
  }

  if (experiment == "ball") {
    params.radius = count_key(kv, "radius", 4, 0, 1000);
  } else if (experiment == "walk") {
    params.n_max = count_key(kv, "n_max", 60, 2, 20000);
    const auto a = kv.get_string("arithmetic", "double");
    if (a == "exact") {
      params.arithmetic = Arithmetic::Exact;
    } else if (a != "double") {
      throw InvalidConfig(fmt::format("unknown arithmetic '{}' (double or exact)", a));
    }
    params.tolerance = kv.get_double("tolerance", 0.02);
  } else if (experiment == "percolate") {
    params.radius = count_key(kv, "radius", 16, 1, 100000);
    params.trials = count_key(kv, "trials", 20, 1, 100000000);
    params.size_floor = count_key(kv, "size_floor", static_cast<long long>(params.radius), 0,
                                  1LL << 40);
    if (kv.has("p_grid")) {
      params.p_grid = kv.get_double_list("p_grid");
    } else if (kv.has("p")) {
      params.p_grid = {probability_key(kv, "p", 0.5)};
    } else {
      params.p_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    }
    for (const double p : params.p_grid) {
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidConfig("every `p_grid` entry must lie in [0, 1]");
    }
  } else if (experiment == "msf") {
    params.radius = count_key(kv, "radius", 8, 2, 100000);
    params.trials = count_key(kv, "trials", 20, 1, 100000000);
    if (kv.has("radius_grid")) {
      for (const double r : kv.get_double_list("radius_grid")) {
        if (r < 2 || r != static_cast<double>(static_cast<std::size_t>(r))) {
          throw InvalidConfig("`radius_grid` entries must be integers >= 2");
        }
        params.radius_grid.push_back(static_cast<std::size_t>(r));
      }
    } else {
      params.radius_grid = {params.radius};
    }
  } else if (experiment == "cycles") {
    params.cycle_n_max = count_key(kv, "n_max", 12, 3, 64);
    params.radius = count_key(kv, "radius", static_cast<long long>((params.cycle_n_max + 1) / 2),
                              0, 1000);
    params.cap = count_key(kv, "cap", static_cast<long long>(kDefaultCycleCap), 1, 1LL << 62);
  } else if (experiment == "bounds") {
    params.radius = count_key(kv, "radius", 6, 1, 1000);
    params.n_max = count_key(kv, "n_max", 200, 4, 20000);
    params.subset_cap = count_key(kv, "subset_cap", 8, 1, 100000);
    params.cycle_n_max = count_key(kv, "cycle_n_max", 10, 3, 64);
  } else if (experiment == "pak-smirnova") {
    params.n_max = count_key(kv, "n_max", 400, 4, 20000);
    params.margin = kv.get_double("margin", kAmenableMargin);
    if (!(params.margin > 0.0 && params.margin < 1.0)) {
      throw InvalidConfig("`margin` must lie in (0, 1)");
    }
  } else if (experiment == "relative-pc") {
    params.radius = count_key(kv, "radius", 32, 1, 100000);
    params.trials = count_key(kv, "trials", 50, 1, 100000000);
    params.p = probability_key(kv, "p", 0.8);
  }
  return params;
}

json stat(double value, Provenance provenance) {
  return json{{"value", value}, {"provenance", to_string(provenance)}};
}

json stat(const Estimate& e, Provenance provenance) {
  return json{{"value", e.value},
              {"stderr", e.std_error},
              {"samples", e.samples},
              {"provenance", to_string(provenance)}};
}

json link(const Link& l) {
  return json{{"value", l.value}, {"provenance", to_string(l.provenance)}, {"vacuous", l.vacuous}};
}

std::string cell(double v) { return fmt::format("{}", v); }
std::string cell(std::uint64_t v) { return fmt::format("{}", v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_field(cells[i]);
      }
      out += "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

struct Outputs {
  Table table;
  json results = json::object();
  json notes = json::array();
  PlotData plot;
};

Outputs run_ball(const Params& params) {
  const auto& pres = *params.pres;
  const auto ball = enumerate_ball(pres, params.radius, pres.preferred_mode());
  Outputs out;
  out.table.header = {"n", "sphere_size"};
  out.plot = {"sphere sizes of the Cayley ball", {"n: word length", "sphere_size: elements of length n"}, {}};
  for (std::size_t n = 0; n <= params.radius; ++n) {
    const auto s = ball.sphere_size(n);
    out.table.rows.push_back({cell(std::uint64_t{n}), cell(std::uint64_t{s})});
    out.plot.rows.push_back({static_cast<double>(n), static_cast<double>(s)});
  }
  out.results["mode"] = to_string(ball.mode());
  out.results["vertex_count"] = stat(static_cast<double>(ball.vertex_count()), Provenance::Diagnostic);
  out.results["edge_count"] = stat(static_cast<double>(ball.edge_count()), Provenance::Diagnostic);
  out.results["boundary_count"] =
      stat(static_cast<double>(ball.graph().boundary_count()), Provenance::Diagnostic);
  out.results["origin_degree"] = stat(static_cast<double>(ball.degree(0)), Provenance::Diagnostic);
  return out;
}

json spectral_json(const SpectralEstimate& est) {
  return json{{"method", to_string(est.method)},
              {"n_max", est.n_max},
              {"rho_hat", stat(est.rho_hat, Provenance::Estimate)},
              {"rho_lower", stat(est.lower_bound, Provenance::CertifiedBound)},
              {"rho_upper", stat(est.upper_bound, est.upper_bound >= 1.0
                                                      ? Provenance::CertifiedBound
                                                      : Provenance::Estimate)},
              {"fit_margin", stat(est.fit_margin, Provenance::Diagnostic)}};
}

Outputs run_walk(const Params& params) {
  const auto& pres = *params.pres;
  WalkOptions options;
  options.arithmetic = params.arithmetic;
  const auto series = return_probabilities(pres, params.n_max, options);
  Outputs out;
  const bool exact = !series.exact.empty();
  out.table.header = {"n", "steps", "p_2n"};
  if (exact) out.table.header.push_back("p_2n_exact");
  out.plot = {"return probabilities", {"steps: walk length 2n", "p_2n: return probability"}, {}};
  for (std::size_t n = 1; n <= series.size(); ++n) {
    std::vector<std::string> row{cell(std::uint64_t{n}), cell(std::uint64_t{2 * n}),
                                 cell(series.even[n - 1])};
    if (exact) row.push_back(series.exact[n - 1].str());
    out.table.rows.push_back(std::move(row));
    out.plot.rows.push_back({static_cast<double>(2 * n), series.even[n - 1]});
  }
  const auto est = spectral_radius(series, params.spectral_method);
  out.results["family_size"] = stat(static_cast<double>(series.family_size), Provenance::Diagnostic);
  out.results["radial_chain"] = series.radial;
  out.results["spectral"] = spectral_json(est);
  out.results["mohar_lower"] =
      stat(mohar_lower_bound(series.family_size, est.upper_bound), Provenance::Estimate);
  if (params.k) {
    const auto check =
        kfold_spectral_check(pres, *params.k, params.n_max, params.tolerance, params.spectral_method);
    out.results["kfold"] = json{{"k", check.k},
                                {"rho_k_hat", stat(check.rho_k_hat, Provenance::Estimate)},
                                {"rho_hat_pow_k", stat(check.rho_hat_pow_k, Provenance::Estimate)},
                                {"tolerance", check.tolerance},
                                {"pass", check.pass}};
  }
  return out;
}

json pc_json(const PcEstimate& est) {
  return json{{"method", to_string(est.method)},
              {"radius", est.radius},
              {"trials", est.trials},
              {"used_trials", est.used_trials},
              {"pc_hat", json{{"value", est.pc_hat},
                              {"stderr", est.std_error},
                              {"provenance", to_string(Provenance::Estimate)}}}};
}

Outputs run_percolate(const Params& params) {
  const auto& pres = *params.pres;
  const auto sweep = percolation_sweep(pres, params.radius, params.p_grid, params.trials,
                                       params.size_floor, params.seed);
  Outputs out;
  out.table.header = {"p",
                      "origin_reaches_boundary",
                      "origin_reaches_boundary_se",
                      "origin_cluster_size",
                      "origin_cluster_size_se",
                      "qualifying_clusters",
                      "qualifying_clusters_se",
                      "unique_fraction",
                      "largest_cluster",
                      "graphing_cost",
                      "graphing_cost_se",
                      "exploration_bits",
                      "exploration_bit_mean",
                      "exploration_lag1"};
  out.plot = {"origin cluster reaching the ball boundary against p",
              {"p: edge density", "theta: fraction of trials whose origin cluster touches the boundary",
               "theta_se: standard error"},
              {}};
  json grid = json::array();
  for (const auto& pt : sweep) {
    const auto cost = graphing_cost(pres, params.radius, pt.p, params.trials, params.seed);
    out.table.rows.push_back({cell(pt.p), cell(pt.origin_reaches_boundary.value),
                              cell(pt.origin_reaches_boundary.std_error),
                              cell(pt.origin_cluster_size.value),
                              cell(pt.origin_cluster_size.std_error),
                              cell(pt.qualifying_clusters.value),
                              cell(pt.qualifying_clusters.std_error), cell(pt.unique_fraction.value),
                              cell(pt.largest_cluster.value), cell(cost.value),
                              cell(cost.std_error), cell(std::uint64_t{pt.exploration.count}),
                              cell(pt.exploration.mean), cell(pt.exploration.lag1)});
    out.plot.rows.push_back(
        {pt.p, pt.origin_reaches_boundary.value, pt.origin_reaches_boundary.std_error});
    grid.push_back(json{
        {"p", pt.p},
        {"origin_reaches_boundary", stat(pt.origin_reaches_boundary, Provenance::Estimate)},
        {"origin_cluster_size", stat(pt.origin_cluster_size, Provenance::Estimate)},
        {"qualifying_clusters", stat(pt.qualifying_clusters, Provenance::Diagnostic)},
        {"unique_fraction", stat(pt.unique_fraction, Provenance::Diagnostic)},
        {"largest_cluster", stat(pt.largest_cluster, Provenance::Diagnostic)},
        {"graphing_cost", stat(cost, Provenance::Estimate)},
        {"exploration",
         json{{"bits", pt.exploration.count},
              {"mean", stat(pt.exploration.mean, Provenance::Diagnostic)},
              {"mean_sigma", stat(pt.exploration.mean_sigma, Provenance::Diagnostic)},
              {"lag1", stat(pt.exploration.lag1, Provenance::Diagnostic)},
              {"lag1_sigma", stat(pt.exploration.lag1_sigma, Provenance::Diagnostic)}}}});
  }
  out.results["radius"] = params.radius;
  out.results["trials"] = params.trials;
  out.results["size_floor"] = params.size_floor;
  out.results["grid"] = grid;
  if (params.pc_method) {
    out.results["pc"] = pc_json(
        estimate_pc(pres, params.radius, params.trials, *params.pc_method, params.seed));
  }
  out.notes.push_back(fmt::format("qualifying_clusters: {}", kCensusCaveat));
  return out;
}

Outputs run_msf(const Params& params) {
  const auto& pres = *params.pres;
  Outputs out;
  out.table.header = {"radius", "trial", "free_root_degree", "wired_root_degree",
                      "origin_symmetric_difference"};
  out.plot = {"free minus wired root degree against radius",
              {"r: ball radius", "gap: mean free - wired root degree", "gap_se: standard error",
               "free: mean free root degree", "wired: mean wired root degree"},
              {}};
  json per_radius = json::array();
  for (const auto r : params.radius_grid) {
    const auto gap = fmsf_wmsf_gap(pres, r, params.trials, params.seed);
    for (std::size_t t = 0; t < gap.per_trial.size(); ++t) {
      const auto& row = gap.per_trial[t];
      out.table.rows.push_back({cell(std::uint64_t{r}), cell(std::uint64_t{t}),
                                cell(std::uint64_t{row.free_root_degree}),
                                cell(std::uint64_t{row.wired_root_degree}),
                                cell(std::uint64_t{row.origin_symmetric_difference})});
    }
    out.plot.rows.push_back({static_cast<double>(r), gap.root_degree_gap.value,
                             gap.root_degree_gap.std_error, gap.free_root_degree.value,
                             gap.wired_root_degree.value});
    per_radius.push_back(json{
        {"radius", r},
        {"trials", gap.trials},
        {"free_root_degree", stat(gap.free_root_degree, Provenance::Estimate)},
        {"wired_root_degree", stat(gap.wired_root_degree, Provenance::Estimate)},
        {"root_degree_gap", stat(gap.root_degree_gap, Provenance::Estimate)},
        {"origin_symmetric_difference", stat(gap.origin_symmetric_difference, Provenance::Estimate)},
        {"free_cost_proxy", stat(gap.free_cost_proxy, Provenance::Diagnostic)},
        {"wired_cost_proxy", stat(gap.wired_cost_proxy, Provenance::Diagnostic)},
        {"free_internal_density", stat(gap.free_internal_density, Provenance::Diagnostic)},
        {"wired_internal_density", stat(gap.wired_internal_density, Provenance::Diagnostic)},
        {"all_wired_components_attached", gap.all_wired_components_attached}});
  }
  out.results["forests"] = per_radius;
  return out;
}

Outputs run_cycles(const Params& params) {
  const auto& pres = *params.pres;
  const auto ball = enumerate_ball(pres, params.radius, BallMode::Geometric);
  const auto census = count_simple_cycles(ball, params.cycle_n_max, params.cap);
  const auto gamma = gamma_estimate(census);
  Outputs out;
  out.table.header = {"n", "a_n"};
  for (std::size_t n = 3; n <= census.n_max; ++n) {
    out.table.rows.push_back({cell(std::uint64_t{n}), cell(census.a[n])});
  }
  out.plot = {"root growth of simple cycle counts",
              {"n: cycle length", "root: a_n^(1/n) for a_n > 0"},
              {}};
  for (const auto& [n, root] : gamma.points) {
    out.plot.rows.push_back({static_cast<double>(n), root});
  }
  json counts = json::object();
  for (std::size_t n = 3; n <= census.n_max; ++n) counts[std::to_string(n)] = census.a[n];
  out.results["a_n"] = counts;
  out.results["paths_visited"] = census.paths_visited;
  out.results["gamma_hat"] = stat(gamma.gamma_hat, Provenance::Estimate);
  out.results["max_root"] = stat(gamma.max_root, Provenance::Estimate);
  if (gamma.ratio) out.results["ratio"] = stat(*gamma.ratio, Provenance::Estimate);
  out.results["vacuous"] = gamma.vacuous;
  return out;
}

Outputs run_bounds(const Params& params) {
  BoundOptions options;
  options.radius = params.radius;
  options.n_max = params.n_max;
  options.subset_cap = params.subset_cap;
  options.cycle_n_max = params.cycle_n_max;
  options.k = params.k;
  const auto report = bound_chain(*params.pres, options);

  std::vector<std::pair<std::string, Link>> links;
  links.emplace_back("rho_lower", report.rho_lower);
  links.emplace_back("rho_upper", report.rho_upper);
  if (report.iota_upper) links.emplace_back("iota_upper", *report.iota_upper);
  if (report.iota_hat) links.emplace_back("iota_hat", *report.iota_hat);
  links.emplace_back("iota_lower_from_rho", report.iota_lower_from_rho);
  if (report.pc_upper_from_iota) links.emplace_back("pc_upper_from_iota", *report.pc_upper_from_iota);
  links.emplace_back("pc_upper_from_rho", report.pc_upper_from_rho);
  links.emplace_back("inverse_mohar", report.inverse_mohar);
  links.emplace_back("inverse_d_rho", report.inverse_d_rho);
  if (report.pu_lower_from_gamma) {
    links.emplace_back("pu_lower_from_gamma", *report.pu_lower_from_gamma);
  }
  links.emplace_back("pu_lower", report.pu_lower);

  Outputs out;
  out.table.header = {"link", "value", "provenance", "vacuous"};
  json jl = json::object();
  for (const auto& [name, l] : links) {
    out.table.rows.push_back({name, cell(l.value), to_string(l.provenance), l.vacuous ? "1" : "0"});
    jl[name] = link(l);
  }
  out.plot = {"bound chain links in chain order",
              {"position: index in the chain", "value: link value"},
              {}};
  for (std::size_t i = 0; i < links.size(); ++i) {
    out.plot.rows.push_back({static_cast<double>(i), links[i].second.value});
  }
  out.results["family_size"] = stat(static_cast<double>(report.family_size), Provenance::Diagnostic);
  out.results["geometric_degree"] =
      stat(static_cast<double>(report.geometric_degree), Provenance::Diagnostic);
  if (report.k_used) out.results["k"] = *report.k_used;
  out.results["spectral"] = spectral_json(report.rho);
  out.results["links"] = jl;
  if (report.iota) {
    out.results["iota"] = json{
        {"mode", to_string(report.iota->mode)},
        {"certified", report.iota->certified},
        {"subset_cap", report.iota->subset_cap},
        {"witness_size", report.iota->witness.size()},
        {"witness_boundary", report.iota->witness_boundary},
        {"subsets_examined", report.iota->subsets_examined},
        {"iota_extrapolated",
         report.iota->iota_extrapolated
             ? stat(*report.iota->iota_extrapolated, Provenance::Estimate)
             : json(nullptr)}};
  }
  if (report.gamma) {
    out.results["gamma_hat"] = stat(report.gamma->gamma_hat, Provenance::Estimate);
  }
  out.results["chain_valid"] = report.chain_valid;
  out.results["chain_ordered"] = report.chain_ordered;
  return out;
}

Outputs run_pak_smirnova(const Params& params) {
  const auto ps = pak_smirnova_k(*params.pres, params.n_max, params.margin);
  Outputs out;
  out.table.header = {"k", "family_size", "rho_upper", "rho_k_bound"};
  out.table.rows.push_back({cell(std::uint64_t(ps.k)), cell(ps.family_size), cell(ps.rho_upper),
                            cell(ps.rho_k_bound)});
  out.plot = {"Pak-Smirnova exponent", {"k: smallest exponent", "rho_k_bound: rho_upper^k"}, {}};
  out.plot.rows.push_back({static_cast<double>(ps.k), ps.rho_k_bound});
  out.results["k"] = ps.k;
  out.results["family_size"] = ps.family_size;
  out.results["rho_upper"] = stat(ps.rho_upper, Provenance::Estimate);
  out.results["rho_k_bound"] = stat(ps.rho_k_bound, Provenance::Estimate);
  if (ps.spectral) out.results["spectral"] = spectral_json(*ps.spectral);
  return out;
}

Outputs run_relative_pc(const Params& params) {
  const auto& pres = *params.pres;
  const auto method = params.pc_method.value_or(
      pres.is_standard_lattice() && pres.rank() == 2 ? PcMethod::Crossing : PcMethod::Invasion);
  const auto est = relative_pc(pres, params.radius, params.p, params.trials, method, params.seed);
  Outputs out;
  out.table.header = {"index", "statistic"};
  out.plot = {"per-trial relative threshold statistics",
              {"index: used trial in trial order", "statistic: per-trial p_c statistic"},
              {}};
  for (std::size_t i = 0; i < est.per_trial.size(); ++i) {
    out.table.rows.push_back({cell(std::uint64_t{i}), cell(est.per_trial[i])});
    out.plot.rows.push_back({static_cast<double>(i), est.per_trial[i]});
  }
  out.results["p"] = params.p;
  out.results["relative_pc"] = pc_json(est);
  return out;
}

Outputs dispatch(const Params& params) {
  const auto& e = params.experiment;
  if (e == "ball") return run_ball(params);
  if (e == "walk") return run_walk(params);
  if (e == "percolate") return run_percolate(params);
  if (e == "msf") return run_msf(params);
  if (e == "cycles") return run_cycles(params);
  if (e == "bounds") return run_bounds(params);
  if (e == "pak-smirnova") return run_pak_smirnova(params);
  return run_relative_pc(params);
}

json config_echo(const KeyValueText& config, std::uint64_t seed) {
  json echo = json::object();
  for (const auto& [k, v] : config.entries()) echo[k] = v;
  echo["seed"] = std::to_string(seed);
  return echo;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

// Restores the worker count when a run with a thread override ends.
class WorkerScope {
 public:
  explicit WorkerScope(std::optional<std::size_t> threads) : active_(threads.has_value()) {
    if (active_) set_worker_count(*threads);
  }
  ~WorkerScope() {
    if (active_) set_worker_count(0);
  }
  WorkerScope(const WorkerScope&) = delete;
  WorkerScope& operator=(const WorkerScope&) = delete;

 private:
  bool active_;
};

}  // namespace

void emit_plotdata(const fs::path& path, PlotData data) {
  std::stable_sort(data.rows.begin(), data.rows.end(),
                   [](const auto& a, const auto& b) { return a.front() < b.front(); });
  std::string text = fmt::format("# {}\n", data.title);
  for (std::size_t i = 0; i < data.columns.size(); ++i) {
    text += fmt::format("# column {}: {}\n", i + 1, data.columns[i]);
  }
  for (const auto& row : data.rows) {
    std::vector<std::string> cells;
    for (const double v : row) cells.push_back(cell(v));
    text += fmt::format("{}\n", fmt::join(cells, " "));
  }
  write_file(path, text);
}

RunResult run(const std::string& experiment, const KeyValueText& config,
              const RunOptions& options) {
  RunResult result;
  Params params;
  try {
    params = parse_params(experiment, config, options);
  } catch (const std::exception& e) {
    result.code = ExitCode::InvalidConfig;
    result.message = e.what();
    return result;
  }

  const WorkerScope workers(options.threads);
  fs::create_directories(options.out_dir);
  const auto stem = options.out_dir / experiment;
  json summary{{"experiment", experiment},
               {"version", kVersion},
               {"seed", params.seed},
               {"presentation", params.pres->name()},
               {"config", config_echo(config, params.seed)}};

  const auto start = std::chrono::steady_clock::now();
  try {
    auto outputs = dispatch(params);
    summary["results"] = outputs.results;
    if (!outputs.notes.empty()) summary["notes"] = outputs.notes;
    const auto csv = fs::path(stem).replace_extension(".csv");
    const auto js = fs::path(stem).replace_extension(".json");
    const auto dat = fs::path(stem).replace_extension(".dat");
    write_file(csv, outputs.table.render());
    write_file(js, summary.dump(2) + "\n");
    emit_plotdata(dat, std::move(outputs.plot));
    result.files = {csv, js, dat};
  } catch (const Error& e) {
    summary["error"] = json{{"kind", to_string(e.kind())}, {"message", e.what()}};
    const auto js = fs::path(stem).replace_extension(".json");
    write_file(js, summary.dump(2) + "\n");
    result.code = ExitCode::ModuleError;
    result.message = e.what();
    result.files = {js};
    return result;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto timing = fs::path(stem).concat(".timing.json");
  write_file(timing, json{{"experiment", experiment}, {"wall_seconds", seconds}}.dump(2) + "\n");
  result.files.push_back(timing);
  return result;
}

}  // namespace cayperc
