#include "cayperc/bounds.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "cayperc/cayley_ball.hpp"
#include "cayperc/error.hpp"

namespace cayperc {

const char* to_string(Provenance provenance) noexcept {
  switch (provenance) {
    case Provenance::CertifiedBound: return "certified-bound";
    case Provenance::Estimate: return "estimate";
    case Provenance::Diagnostic: return "diagnostic";
  }
  return "?";
}

namespace {

double inverse(double x) {
  return x > 0.0 ? 1.0 / x : std::numeric_limits<double>::infinity();
}

// Relative slack for comparing links that coincide algebraically.
constexpr double kOrderSlack = 1e-12;

bool ordered(double a, double b) { return a <= b * (1.0 + kOrderSlack) + kOrderSlack; }

}  // namespace

RhoLinks rho_links(double d, double rho_upper, Provenance provenance) {
  const double mohar = d * (1.0 - rho_upper);
  RhoLinks out;
  out.iota_lower_from_rho = {mohar, provenance, mohar <= 0.0};
  out.pc_upper_from_rho = {inverse(mohar + 1.0), provenance, mohar <= 0.0};
  out.inverse_mohar = {inverse(mohar), provenance, mohar <= 0.0};
  out.inverse_d_rho = {inverse(d * rho_upper), provenance, d * rho_upper <= 1.0};
  return out;
}

BoundReport bound_chain(const GroupPresentation& pres, const BoundOptions& options) {
  BoundReport report;
  report.presentation = pres.name();
  const auto geometric = enumerate_ball(pres, 1, BallMode::Geometric);
  report.geometric_degree = geometric.degree(0);

  double d = static_cast<double>(pres.family_size());
  if (options.k) {
    const int k = *options.k;
    if (k < 1) fail(ErrorKind::Precondition, "k must be at least 1");
    // P_{S^[k]} = P_S^k, so rho(S^[k]) = rho(S)^k and the family has |S|^k members.
    const auto base = spectral_radius(pres, options.n_max);
    report.rho = base;
    report.rho.rho_hat = std::pow(base.rho_hat, k);
    report.rho.lower_bound = std::pow(base.lower_bound, k);
    report.rho.upper_bound = std::pow(base.upper_bound, k);
    report.rho.fit_margin = report.rho.upper_bound - report.rho.rho_hat;
    d = std::pow(d, k);
    report.k_used = k;
  } else {
    report.rho = spectral_radius(pres, options.n_max);
  }
  report.family_size = static_cast<std::size_t>(d);

  const double rho_u = report.rho.upper_bound;
  const bool raw_upper = rho_u >= 1.0;
  report.rho_lower = {report.rho.lower_bound, Provenance::CertifiedBound, false};
  report.rho_upper = {rho_u, raw_upper ? Provenance::CertifiedBound : Provenance::Estimate,
                      raw_upper};
  const auto rho_prov = report.rho_upper.provenance;

  if (!options.k) {
    const auto ball = enumerate_ball(pres, options.radius, BallMode::Geometric);
    report.iota = isoperimetric_search(ball, options.subset_cap, rho_u);
    report.iota_upper = Link{report.iota->iota_upper, Provenance::CertifiedBound, false};
    report.iota_hat = report.iota->iota_extrapolated
                          ? Link{*report.iota->iota_extrapolated, Provenance::Estimate, false}
                          : *report.iota_upper;
    report.pc_upper_from_iota =
        Link{inverse(report.iota_hat->value + 1.0), Provenance::Estimate, false};
    const auto cycle_ball =
        options.radius >= (options.cycle_n_max + 1) / 2
            ? ball
            : enumerate_ball(pres, (options.cycle_n_max + 1) / 2, BallMode::Geometric);
    report.census = count_simple_cycles(cycle_ball, options.cycle_n_max);
    report.gamma = gamma_estimate(*report.census);
    report.pu_lower_from_gamma =
        Link{report.gamma->vacuous ? 1.0 : inverse(report.gamma->gamma_hat), Provenance::Estimate,
             report.gamma->vacuous};
  }

  const auto links = rho_links(d, rho_u, rho_prov);
  report.iota_lower_from_rho = links.iota_lower_from_rho;
  report.pc_upper_from_rho = links.pc_upper_from_rho;
  report.inverse_mohar = links.inverse_mohar;
  report.inverse_d_rho = links.inverse_d_rho;

  report.pu_lower = report.inverse_d_rho;
  if (report.pu_lower_from_gamma && !report.pu_lower_from_gamma->vacuous &&
      report.pu_lower_from_gamma->value > report.pu_lower.value) {
    report.pu_lower = *report.pu_lower_from_gamma;
  }
  if (report.pu_lower.value >= 1.0) {
    report.pu_lower = {1.0, Provenance::CertifiedBound, true};
  }

  report.chain_valid = rho_u <= 0.5;
  if (report.chain_valid) {
    bool ok = ordered(report.pc_upper_from_rho.value, report.inverse_mohar.value) &&
              ordered(report.inverse_mohar.value, report.inverse_d_rho.value) &&
              ordered(report.inverse_d_rho.value, report.pu_lower.value);
    if (report.pc_upper_from_iota) {
      ok = ok && ordered(report.pc_upper_from_iota->value, report.pu_lower.value);
    }
    report.chain_ordered = ok;
  }
  return report;
}

PakSmirnova pak_smirnova_k(double rho_upper, std::size_t family_size, double margin) {
  if (!(rho_upper >= 0.0)) fail(ErrorKind::Precondition, "rho upper bound must be non-negative");
  if (rho_upper >= 1.0 - margin) {
    fail(ErrorKind::Undetermined,
         fmt::format("amenable or undetermined: rho upper bound {:.6f} is within {} of 1",
                     rho_upper, margin));
  }
  PakSmirnova out;
  out.rho_upper = rho_upper;
  out.k = 1;
  double power = rho_upper;
  while (power > 0.5) {
    ++out.k;
    power *= rho_upper;
  }
  out.rho_k_bound = power;
  std::uint64_t size = 1;
  for (int i = 0; i < out.k; ++i) {
    if (size > std::numeric_limits<std::uint64_t>::max() / std::max<std::size_t>(family_size, 1)) {
      size = std::numeric_limits<std::uint64_t>::max();
      break;
    }
    size *= family_size;
  }
  out.family_size = size;
  return out;
}

PakSmirnova pak_smirnova_k(const GroupPresentation& pres, std::size_t n_max, double margin) {
  if (!pres.contains_identity()) {
    fail(ErrorKind::Precondition, "the k-fold argument needs the identity in the family");
  }
  const auto est = spectral_radius(pres, n_max);
  auto out = pak_smirnova_k(est.upper_bound, pres.family_size(), margin);
  out.spectral = est;
  return out;
}

}  // namespace cayperc
