#pragma once

// Finitely generated groups with evaluatable generating families.
//
// Elements are exact integer encodings, which double as the element key used
// for hashing, equality and the canonical vertex order of Cayley balls:
//   lattice Z^d : the coordinate tuple (length d)
//   free F_k    : the reduced word, letters +-1..+-k (inverse = negated letter)
//   matrix      : the 2x2 integer matrix, row-major

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cayperc {

class KeyValueText;

using Element = std::vector<std::int64_t>;

enum class GroupFamily { Lattice, Free, Matrix };
enum class BallMode { Geometric, Family };

const char* to_string(GroupFamily family) noexcept;
const char* to_string(BallMode mode) noexcept;
BallMode parse_ball_mode(std::string_view text);

class GroupPresentation {
 public:
  /// Validates every generator and computes the symmetric/identity flags.
  /// `rank` is d for lattices, k for free groups and 2 for matrix groups.
  GroupPresentation(std::string name, GroupFamily family, int rank,
                    std::vector<Element> generators,
                    BallMode preferred_mode = BallMode::Geometric);

  const std::string& name() const noexcept { return name_; }
  GroupFamily family() const noexcept { return family_; }
  int rank() const noexcept { return rank_; }
  std::span<const Element> generators() const noexcept { return generators_; }
  std::size_t family_size() const noexcept { return generators_.size(); }
  bool symmetric() const noexcept { return symmetric_; }
  bool contains_identity() const noexcept { return contains_identity_; }
  BallMode preferred_mode() const noexcept { return preferred_mode_; }

  Element identity() const;
  bool is_identity(std::span<const std::int64_t> a) const;
  Element multiply(std::span<const std::int64_t> a, std::span<const std::int64_t> b) const;
  Element inverse(std::span<const std::int64_t> a) const;

  /// Human-readable form: (1,-2), aB, [1,2;0,1].
  std::string format(std::span<const std::int64_t> a) const;

  /// Z^d with exactly the family (+e_1, -e_1, ..., +e_d, -e_d) in any order.
  bool is_standard_lattice() const;

 private:
  void validate(const Element& g) const;

  std::string name_;
  GroupFamily family_;
  int rank_;
  std::vector<Element> generators_;
  BallMode preferred_mode_;
  bool symmetric_ = false;
  bool contains_identity_ = false;
};

/// Parses `family`, `d` or `k`, `generators`, `mode` and optional `name`.
/// Generator syntax:
///   lattice: `(1,0) (-1,0)` or bare integers when d = 1 (`+1 -1 0`)
///   free:    words over a..z with upper case for inverses (`a A b B`, `1` = identity)
///   matrix:  `[a,b;c,d]` entries row-major, determinant must be +-1
/// A missing `generators` key selects the standard symmetric family.
GroupPresentation parse_presentation(std::string_view text_in);
GroupPresentation parse_presentation(const KeyValueText& kv);

/// Keys consumed by parse_presentation.
const std::vector<std::string>& presentation_keys();

/// All ordered k-products s_{i1} ... s_{ik}, in lexicographic index order.
GroupPresentation kfold_family(const GroupPresentation& pres, int k,
                               std::size_t family_cap = 2'000'000);

/// The family with the identity appended once.
GroupPresentation lazify(const GroupPresentation& pres);

/// One representative generator index per inverse pair {s, s^-1} of distinct
/// non-identity elements (involutions count once). These index the generator
/// maps of the cluster graphing.
std::vector<std::size_t> generator_maps(const GroupPresentation& pres);

/// Reduced length of a free-group element.
inline std::size_t free_length(std::span<const std::int64_t> word) noexcept {
  return word.size();
}

}  // namespace cayperc
