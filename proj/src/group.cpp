#include "cayperc/group.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include <fmt/format.h>

#include "cayperc/error.hpp"
#include "cayperc/keyvalue.hpp"

namespace cayperc {

const char* to_string(GroupFamily family) noexcept {
  switch (family) {
    case GroupFamily::Lattice: return "lattice";
    case GroupFamily::Free: return "free";
    case GroupFamily::Matrix: return "matrix";
  }
  return "unknown";
}

const char* to_string(BallMode mode) noexcept {
  return mode == BallMode::Geometric ? "geometric" : "family";
}

BallMode parse_ball_mode(std::string_view text) {
  if (text == "geometric") return BallMode::Geometric;
  if (text == "family") return BallMode::Family;
  fail(ErrorKind::InvalidInput, fmt::format("unknown mode `{}`", text));
}

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    fail(ErrorKind::CapExceeded, "matrix entry overflow");
  }
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    fail(ErrorKind::CapExceeded, "group element coordinate overflow");
  }
  return out;
}

std::int64_t determinant(std::span<const std::int64_t> m) {
  return checked_add(checked_mul(m[0], m[3]), -checked_mul(m[1], m[2]));
}

}  // namespace

GroupPresentation::GroupPresentation(std::string name, GroupFamily family, int rank,
                                     std::vector<Element> generators,
                                     BallMode preferred_mode)
    : name_(std::move(name)),
      family_(family),
      rank_(rank),
      generators_(std::move(generators)),
      preferred_mode_(preferred_mode) {
  if (rank_ < 1) fail(ErrorKind::InvalidInput, "group rank must be positive");
  if (family_ == GroupFamily::Matrix && rank_ != 2) {
    fail(ErrorKind::InvalidInput, "only 2x2 integer matrix groups are supported");
  }
  if (generators_.empty()) fail(ErrorKind::InvalidInput, "empty generating family");
  for (const auto& g : generators_) validate(g);

  std::map<Element, long> balance;
  for (const auto& g : generators_) {
    ++balance[g];
    --balance[inverse(g)];
    if (is_identity(g)) contains_identity_ = true;
  }
  symmetric_ = std::all_of(balance.begin(), balance.end(),
                           [](const auto& kv) { return kv.second == 0; });
}

void GroupPresentation::validate(const Element& g) const {
  switch (family_) {
    case GroupFamily::Lattice:
      if (g.size() != static_cast<std::size_t>(rank_)) {
        fail(ErrorKind::InvalidInput,
             fmt::format("lattice generator has {} coordinates, expected {}", g.size(), rank_));
      }
      break;
    case GroupFamily::Free:
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] == 0 || g[i] > rank_ || g[i] < -rank_) {
          fail(ErrorKind::InvalidInput, "free-group letter out of range");
        }
        if (i > 0 && g[i] == -g[i - 1]) {
          fail(ErrorKind::InvalidInput, "free-group generator is not reduced");
        }
      }
      break;
    case GroupFamily::Matrix: {
      if (g.size() != 4) fail(ErrorKind::InvalidInput, "matrix generator needs 4 entries");
      const auto det = determinant(g);
      if (det != 1 && det != -1) {
        fail(ErrorKind::InvalidInput,
             fmt::format("matrix generator {} is not invertible over Z (det {})", format(g), det));
      }
      break;
    }
  }
}

Element GroupPresentation::identity() const {
  switch (family_) {
    case GroupFamily::Lattice: return Element(static_cast<std::size_t>(rank_), 0);
    case GroupFamily::Free: return {};
    case GroupFamily::Matrix: return {1, 0, 0, 1};
  }
  return {};
}

bool GroupPresentation::is_identity(std::span<const std::int64_t> a) const {
  switch (family_) {
    case GroupFamily::Lattice:
      return std::all_of(a.begin(), a.end(), [](auto x) { return x == 0; });
    case GroupFamily::Free: return a.empty();
    case GroupFamily::Matrix: return a[0] == 1 && a[1] == 0 && a[2] == 0 && a[3] == 1;
  }
  return false;
}

Element GroupPresentation::multiply(std::span<const std::int64_t> a,
                                    std::span<const std::int64_t> b) const {
  switch (family_) {
    case GroupFamily::Lattice: {
      Element out(a.begin(), a.end());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked_add(out[i], b[i]);
      return out;
    }
    case GroupFamily::Free: {
      Element out;
      out.reserve(a.size() + b.size());
      out.assign(a.begin(), a.end());
      for (const auto letter : b) {
        if (!out.empty() && out.back() == -letter) {
          out.pop_back();
        } else {
          out.push_back(letter);
        }
      }
      return out;
    }
    case GroupFamily::Matrix:
      return {checked_add(checked_mul(a[0], b[0]), checked_mul(a[1], b[2])),
              checked_add(checked_mul(a[0], b[1]), checked_mul(a[1], b[3])),
              checked_add(checked_mul(a[2], b[0]), checked_mul(a[3], b[2])),
              checked_add(checked_mul(a[2], b[1]), checked_mul(a[3], b[3]))};
  }
  return {};
}

Element GroupPresentation::inverse(std::span<const std::int64_t> a) const {
  switch (family_) {
    case GroupFamily::Lattice: {
      Element out(a.begin(), a.end());
      for (auto& x : out) x = -x;
      return out;
    }
    case GroupFamily::Free: {
      Element out(a.rbegin(), a.rend());
      for (auto& x : out) x = -x;
      return out;
    }
    case GroupFamily::Matrix: {
      // det = +-1, so the inverse is det * adjugate.
      const auto det = determinant(a);
      return {det * a[3], -det * a[1], -det * a[2], det * a[0]};
    }
  }
  return {};
}

std::string GroupPresentation::format(std::span<const std::int64_t> a) const {
  switch (family_) {
    case GroupFamily::Lattice: return fmt::format("({})", fmt::join(a, ","));
    case GroupFamily::Free: {
      if (a.empty()) return "1";
      std::string out;
      for (const auto letter : a) {
        const char base = letter > 0 ? 'a' : 'A';
        out.push_back(static_cast<char>(base + (std::abs(letter) - 1)));
      }
      return out;
    }
    case GroupFamily::Matrix:
      return fmt::format("[{},{};{},{}]", a[0], a[1], a[2], a[3]);
  }
  return {};
}

bool GroupPresentation::is_standard_lattice() const {
  if (family_ != GroupFamily::Lattice) return false;
  if (generators_.size() != 2 * static_cast<std::size_t>(rank_)) return false;
  std::vector<Element> expected;
  for (int i = 0; i < rank_; ++i) {
    Element e(static_cast<std::size_t>(rank_), 0);
    e[static_cast<std::size_t>(i)] = 1;
    expected.push_back(e);
    e[static_cast<std::size_t>(i)] = -1;
    expected.push_back(e);
  }
  auto have = generators_;
  std::sort(have.begin(), have.end());
  std::sort(expected.begin(), expected.end());
  return have == expected;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::int64_t parse_integer(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) fail(ErrorKind::InvalidInput, "empty integer in generator list");
  std::int64_t value = 0;
  bool negative = false;
  std::size_t i = 0;
  if (token[0] == '-') {
    negative = true;
    i = 1;
  }
  if (i == token.size()) fail(ErrorKind::InvalidInput, "malformed integer in generator list");
  for (; i < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) {
      fail(ErrorKind::InvalidInput, fmt::format("malformed integer `{}`", token));
    }
    value = checked_add(checked_mul(value, 10), token[i] - '0');
  }
  return negative ? -value : value;
}

std::vector<std::int64_t> parse_integer_list(std::string_view body, std::string_view seps) {
  std::vector<std::int64_t> out;
  while (true) {
    const auto sep = body.find_first_of(seps);
    out.push_back(parse_integer(body.substr(0, sep)));
    if (sep == std::string_view::npos) break;
    body = body.substr(sep + 1);
  }
  return out;
}

// Splits at top-level whitespace; bracketed groups stay whole.
std::vector<std::string_view> split_tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t depth = 0, start = std::string_view::npos;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const char c = i < text.size() ? text[i] : ' ';
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') {
      if (depth == 0) fail(ErrorKind::InvalidInput, "unbalanced bracket in generators");
      --depth;
    }
    const bool blank = std::isspace(static_cast<unsigned char>(c)) && depth == 0;
    if (!blank && start == std::string_view::npos) start = i;
    if (blank && start != std::string_view::npos) {
      out.push_back(text.substr(start, i - start));
      start = std::string_view::npos;
    }
  }
  if (depth != 0) fail(ErrorKind::InvalidInput, "unbalanced bracket in generators");
  return out;
}

std::string_view strip_brackets(std::string_view token, char open, char close) {
  if (token.size() < 2 || token.front() != open || token.back() != close) {
    fail(ErrorKind::InvalidInput, fmt::format("expected {}...{} around `{}`", open, close, token));
  }
  return token.substr(1, token.size() - 2);
}

Element parse_lattice_element(std::string_view token, int d) {
  Element out;
  if (token.front() == '(') {
    const auto body = trim(strip_brackets(token, '(', ')'));
    if (!body.empty()) out = parse_integer_list(body, ",");
  } else {
    out = {parse_integer(token)};
  }
  if (out.size() != static_cast<std::size_t>(d)) {
    fail(ErrorKind::InvalidInput,
         fmt::format("lattice generator `{}` has {} coordinates, expected {}", token, out.size(), d));
  }
  return out;
}

Element parse_free_element(std::string_view token, int k) {
  Element out;
  if (token == "1" || token == "e") return out;
  for (const char c : token) {
    std::int64_t letter = 0;
    if (c >= 'a' && c <= 'z') {
      letter = c - 'a' + 1;
    } else if (c >= 'A' && c <= 'Z') {
      letter = -(c - 'A' + 1);
    } else {
      fail(ErrorKind::InvalidInput, fmt::format("bad free-group letter `{}`", c));
    }
    if (std::abs(letter) > k) {
      fail(ErrorKind::InvalidInput, fmt::format("letter `{}` exceeds rank {}", c, k));
    }
    if (!out.empty() && out.back() == -letter) {
      out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

Element parse_matrix_element(std::string_view token) {
  auto body = strip_brackets(token, '[', ']');
  auto entries = parse_integer_list(body, ",;");
  if (entries.size() != 4) {
    fail(ErrorKind::InvalidInput, fmt::format("matrix `{}` must have 4 entries", token));
  }
  return entries;
}

std::vector<Element> standard_family(GroupFamily family, int rank) {
  std::vector<Element> out;
  if (family == GroupFamily::Lattice) {
    for (int i = 0; i < rank; ++i) {
      Element e(static_cast<std::size_t>(rank), 0);
      e[static_cast<std::size_t>(i)] = 1;
      out.push_back(e);
      e[static_cast<std::size_t>(i)] = -1;
      out.push_back(e);
    }
  } else if (family == GroupFamily::Free) {
    for (int i = 1; i <= rank; ++i) {
      out.push_back({i});
      out.push_back({-i});
    }
  } else {
    fail(ErrorKind::InvalidInput, "matrix presentations need explicit generators");
  }
  return out;
}

}  // namespace

const std::vector<std::string>& presentation_keys() {
  static const std::vector<std::string> keys{"name", "family", "d", "k", "generators", "mode"};
  return keys;
}

GroupPresentation parse_presentation(std::string_view text_in) {
  const auto kv = KeyValueText::parse(text_in);
  kv.require_known(presentation_keys());
  return parse_presentation(kv);
}

GroupPresentation parse_presentation(const KeyValueText& kv) {
  const auto family_name = kv.get("family");
  if (!family_name) fail(ErrorKind::InvalidInput, "presentation needs a `family` key");

  GroupFamily family{};
  int rank = 0;
  std::string default_name;
  if (*family_name == "lattice") {
    family = GroupFamily::Lattice;
    rank = static_cast<int>(kv.get_int("d", 0));
    if (kv.has("k")) fail(ErrorKind::InvalidInput, "lattice presentations take `d`, not `k`");
    default_name = rank == 1 ? "Z" : fmt::format("Z^{}", rank);
  } else if (*family_name == "free") {
    family = GroupFamily::Free;
    rank = static_cast<int>(kv.get_int("k", 0));
    if (kv.has("d")) fail(ErrorKind::InvalidInput, "free presentations take `k`, not `d`");
    if (rank > 26) fail(ErrorKind::InvalidInput, "free rank above 26 is not supported");
    default_name = fmt::format("F_{}", rank);
  } else if (*family_name == "matrix") {
    family = GroupFamily::Matrix;
    rank = 2;
    default_name = "GL2(Z)-subgroup";
  } else {
    fail(ErrorKind::InvalidInput, fmt::format("unsupported group family `{}`", *family_name));
  }
  if (rank < 1) fail(ErrorKind::InvalidInput, "missing or non-positive rank (`d` or `k`)");

  std::vector<Element> generators;
  if (const auto text = kv.get("generators")) {
    if (trim(*text) == "()") fail(ErrorKind::InvalidInput, "empty generating family");
    for (const auto token : split_tokens(*text)) {
      switch (family) {
        case GroupFamily::Lattice: generators.push_back(parse_lattice_element(token, rank)); break;
        case GroupFamily::Free: generators.push_back(parse_free_element(token, rank)); break;
        case GroupFamily::Matrix: generators.push_back(parse_matrix_element(token)); break;
      }
    }
    if (generators.empty()) fail(ErrorKind::InvalidInput, "empty generating family");
  } else {
    generators = standard_family(family, rank);
  }

  const auto mode = parse_ball_mode(kv.get_string("mode", "geometric"));
  return GroupPresentation(kv.get_string("name", default_name), family, rank,
                           std::move(generators), mode);
}

GroupPresentation kfold_family(const GroupPresentation& pres, int k, std::size_t family_cap) {
  if (k < 1) fail(ErrorKind::Precondition, "k-fold family needs k >= 1");
  const auto base = pres.generators();
  std::size_t size = 1;
  for (int i = 0; i < k; ++i) {
    if (size > family_cap / base.size()) {
      fail(ErrorKind::CapExceeded,
           fmt::format("|S|^k = {}^{} exceeds the family cap {}", base.size(), k, family_cap));
    }
    size *= base.size();
  }

  std::vector<Element> products(base.begin(), base.end());
  for (int level = 1; level < k; ++level) {
    std::vector<Element> next;
    next.reserve(products.size() * base.size());
    for (const auto& prefix : products) {
      for (const auto& s : base) next.push_back(pres.multiply(prefix, s));
    }
    products = std::move(next);
  }
  return GroupPresentation(fmt::format("{}[{}]", pres.name(), k), pres.family(), pres.rank(),
                           std::move(products), pres.preferred_mode());
}

GroupPresentation lazify(const GroupPresentation& pres) {
  std::vector<Element> generators(pres.generators().begin(), pres.generators().end());
  generators.push_back(pres.identity());
  return GroupPresentation(pres.name() + "+1", pres.family(), pres.rank(), std::move(generators),
                           pres.preferred_mode());
}

std::vector<std::size_t> generator_maps(const GroupPresentation& pres) {
  std::vector<std::size_t> out;
  std::vector<Element> seen;
  const auto gens = pres.generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (pres.is_identity(gens[i])) continue;
    const auto inv = pres.inverse(gens[i]);
    const bool known = std::any_of(seen.begin(), seen.end(), [&](const Element& e) {
      return e == gens[i] || e == inv;
    });
    if (known) continue;
    seen.push_back(gens[i]);
    out.push_back(i);
  }
  return out;
}

}  // namespace cayperc
