#pragma once
// The chain p_c <= 1/(iota+1) < 1/iota <= 1/(d(1-rho)) <= 1/(d rho) <= 1/gamma <= p_u
// assembled from the walk, isoperimetric and cycle modules.

#include <cstdint>
#include <optional>
#include <string>

#include "cayperc/cycles.hpp"
#include "cayperc/group.hpp"
#include "cayperc/isoperimetric.hpp"
#include "cayperc/walk.hpp"

namespace cayperc {

enum class Provenance { CertifiedBound, Estimate, Diagnostic };

const char* to_string(Provenance provenance) noexcept;

struct Link {
  double value = 0.0;
  Provenance provenance = Provenance::Estimate;
  /// The link holds trivially and carries no information.
  bool vacuous = false;
};

/// The links of the chain that depend only on d and an upper bound on rho.
struct RhoLinks {
  Link iota_lower_from_rho;   // d (1 - rho_upper)
  Link pc_upper_from_rho;     // 1 / (d (1 - rho_upper) + 1)
  Link inverse_mohar;         // 1 / (d (1 - rho_upper))
  Link inverse_d_rho;         // 1 / (d rho_upper)
};

RhoLinks rho_links(double d, double rho_upper, Provenance provenance);

struct BoundOptions {
  std::size_t radius = 8;            // ball radius for the isoperimetric search
  std::size_t n_max = 200;           // walk steps for the spectral estimate
  std::size_t subset_cap = 10;
  std::size_t cycle_n_max = 12;
  /// Run on the k-fold family S^[k]; the isoperimetric and cycle stages are
  /// skipped because the k-fold ball is out of reach.
  std::optional<int> k;
};

struct BoundReport {
  std::string presentation;
  std::size_t family_size = 0;       // d of the walk operator, |S| or |S|^k
  std::size_t geometric_degree = 0;  // distinct neighbours of the origin
  std::optional<int> k_used;

  SpectralEstimate rho;              // for the family in use (rho^k in k-fold mode)
  Link rho_lower;                    // certified
  Link rho_upper;                    // fit estimate
  std::optional<IsoperimetricReport> iota;
  std::optional<CycleCensus> census;
  std::optional<GammaEstimate> gamma;

  std::optional<Link> iota_upper;               // explicit subset witness
  std::optional<Link> iota_hat;                 // extrapolated slope, else iota_upper
  std::optional<Link> pc_upper_from_iota;       // 1 / (iota_hat + 1)
  Link iota_lower_from_rho;
  Link pc_upper_from_rho;
  Link inverse_mohar;
  Link inverse_d_rho;
  std::optional<Link> pu_lower_from_gamma;      // 1 / gamma_hat
  Link pu_lower;                                // best non-vacuous p_u lower bound

  bool chain_valid = false;                     // rho_upper <= 1/2
  /// When chain_valid: every link is ordered as in the chain.
  bool chain_ordered = false;
};

BoundReport bound_chain(const GroupPresentation& pres, const BoundOptions& options);

struct PakSmirnova {
  int k = 1;
  double rho_upper = 1.0;
  double rho_k_bound = 1.0;  // rho_upper^k <= 1/2
  std::uint64_t family_size = 0;  // |S|^k, saturating
  std::optional<SpectralEstimate> spectral;
};

inline constexpr double kAmenableMargin = 0.01;

/// Smallest k with rho_upper^k <= 1/2. Needs the identity in the family and
/// rho_upper < 1 - margin.
PakSmirnova pak_smirnova_k(const GroupPresentation& pres, std::size_t n_max = 400,
                           double margin = kAmenableMargin);
PakSmirnova pak_smirnova_k(double rho_upper, std::size_t family_size,
                           double margin = kAmenableMargin);

}  // namespace cayperc
