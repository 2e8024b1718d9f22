#pragma once

#include <array>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gonosim/errors.hpp"
#include "gonosim/numeric.hpp"
#include "gonosim/state.hpp"

namespace gonosim {

// Offspring distribution table for a two-sex genotype system. Row (i, j)
// holds the probability of each offspring genotype for a female of genotype
// female_types[i] crossed with a male of genotype male_types[j]; columns are
// indexed by female_types followed by male_types. Every row sums to 1.
template <class S>
struct CrossTable {
  std::vector<std::string> female_types;
  std::vector<std::string> male_types;
  std::vector<std::vector<S>> rows;  // size n*nu, each row of size n+nu

  std::size_t female_count() const { return female_types.size(); }
  std::size_t male_count() const { return male_types.size(); }
  const std::vector<S>& row(std::size_t i, std::size_t j) const {
    return rows[i * male_types.size() + j];
  }

  friend bool operator==(const CrossTable&, const CrossTable&) = default;
};

inline constexpr double kRowSumTol = 1e-12;

template <class S>
void validate_cross_table(const CrossTable<S>& t) {
  using T = scalar_traits<S>;
  const std::size_t n = t.female_count(), nu = t.male_count();
  if (n == 0 || nu == 0) fail(ErrorCode::BadInput, "cross table needs both sexes");
  if (t.rows.size() != n * nu)
    fail(ErrorCode::BadInput, "cross table has " + std::to_string(t.rows.size()) +
                                  " rows, expected " + std::to_string(n * nu));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r].size() != n + nu)
      fail(ErrorCode::BadInput, "row " + std::to_string(r) + " has wrong width");
    S sum{};
    for (const S& p : t.rows[r]) {
      if (!T::finite(p)) fail(ErrorCode::NonFiniteComponent, "row " + std::to_string(r));
      if (p < 0)
        fail(ErrorCode::NegativeComponent,
             "row " + std::to_string(r) + " entry " + format_scalar(p));
      sum += p;
    }
    bool ok;
    if constexpr (T::exact)
      ok = (sum == 1);
    else
      ok = T::abs(sum - 1) <= kRowSumTol;
    if (!ok)
      fail(ErrorCode::SumOutOfTolerance,
           "row " + std::to_string(r) + " sums to " + format_scalar(sum));
  }
}

// X-linked recessive lethal-allele system (hemophilia): females XX, XX^h,
// males XY, X^hY. X^hX^h females and surviving X^h homozygotes do not occur.
template <class S>
CrossTable<S> hemophilia_cross_table() {
  using T = scalar_traits<S>;
  auto f = [](long n, long d) { return T::from_fraction(n, d); };
  CrossTable<S> t;
  t.female_types = {"XX", "XXh"};
  t.male_types = {"XY", "XhY"};
  t.rows = {
      // columns: XX, XXh, XY, XhY
      {f(1, 2), f(0, 1), f(1, 2), f(0, 1)},  // XX x XY
      {f(0, 1), f(1, 2), f(1, 2), f(0, 1)},  // XX x XhY
      {f(1, 4), f(1, 4), f(1, 4), f(1, 4)},  // XXh x XY
      {f(0, 1), f(1, 3), f(1, 3), f(1, 3)},  // XXh x XhY
  };
  return t;
}

enum class OperatorMode { Normalized, Unnormalized };

template <class S>
struct GonosomalOperator {
  CrossTable<S> table;
  OperatorMode mode = OperatorMode::Normalized;
};

template <class S>
GonosomalOperator<S> hemophilia_operator(OperatorMode mode = OperatorMode::Normalized) {
  return {hemophilia_cross_table<S>(), mode};
}

namespace detail {

template <class S>
void require_2x2(const CrossTable<S>& t) {
  if (t.female_count() != 2 || t.male_count() != 2)
    fail(ErrorCode::BadInput, "operator application expects 2 female and 2 male genotypes");
}

}  // namespace detail

// Table-driven normalized step: next_k = sum_ij row(i,j)[k] f_i m_j divided
// by (sum f)(sum m).
template <class S>
PopulationState<S> apply_general(const GonosomalOperator<S>& op, const PopulationState<S>& s) {
  detail::require_2x2(op.table);
  const S f[2] = {s.x, s.y};
  const S m[2] = {s.u, s.v};
  const S females = S(s.x + s.y), males = S(s.u + s.v);
  bool degenerate;
  if constexpr (scalar_traits<S>::exact)
    degenerate = (females == 0 || males == 0);
  else
    degenerate = !(females >= kDegenerateGuard && males >= kDegenerateGuard);
  if (degenerate) fail(ErrorCode::DegenerateSex, "input frequencies at " + format_state(s));
  const S denom = S(females * males);
  std::array<S, 4> out{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const S w = S(f[i] * m[j]);
      const auto& row = op.table.row(i, j);
      for (std::size_t k = 0; k < 4; ++k) out[k] += row[k] * w;
    }
  for (auto& c : out) c /= denom;
  return validate_population(out[0], out[1], out[2], out[3]);
}

// Unnormalized variant: the same bilinear numerators with the frequency
// product denominator omitted. Degree-2 homogeneous.
template <class S>
RawState4<S> apply_unnormalized(const GonosomalOperator<S>& op, const RawState4<S>& s) {
  detail::require_2x2(op.table);
  using T = scalar_traits<S>;
  const S* comps[4] = {&s.x, &s.y, &s.u, &s.v};
  for (int i = 0; i < 4; ++i) {
    if (!T::finite(*comps[i])) fail(ErrorCode::NonFiniteComponent, "input " + format_state(s));
    if (*comps[i] < 0) fail(ErrorCode::NegativeComponent, "input " + format_state(s));
  }
  const S f[2] = {s.x, s.y};
  const S m[2] = {s.u, s.v};
  std::array<S, 4> out{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const S w = S(f[i] * m[j]);
      const auto& row = op.table.row(i, j);
      for (std::size_t k = 0; k < 4; ++k) out[k] += row[k] * w;
    }
  if constexpr (!T::exact) {
    for (const S& c : out)
      if (!T::finite(c) || T::abs(c) > 1e300)
        fail(ErrorCode::Overflow, "image of " + format_state(s));
  }
  return {out[0], out[1], out[2], out[3]};
}

// Text form, round-trips exactly in both modes:
//   female: XX XXh
//   male: XY XhY
//   cross XX x XY -> XX:1/2 XY:1/2
template <class S>
std::string serialize_cross_table(const CrossTable<S>& t) {
  std::ostringstream os;
  os << "female:";
  for (const auto& g : t.female_types) os << ' ' << g;
  os << "\nmale:";
  for (const auto& g : t.male_types) os << ' ' << g;
  os << '\n';
  const std::size_t n = t.female_count(), nu = t.male_count();
  std::vector<std::string> labels = t.female_types;
  labels.insert(labels.end(), t.male_types.begin(), t.male_types.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < nu; ++j) {
      os << "cross " << t.female_types[i] << " x " << t.male_types[j] << " ->";
      const auto& row = t.row(i, j);
      for (std::size_t k = 0; k < n + nu; ++k)
        if (row[k] != 0) os << ' ' << labels[k] << ':' << format_scalar(row[k]);
      os << '\n';
    }
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

inline std::size_t label_index(const std::vector<std::string>& labels, const std::string& g,
                               std::size_t line_no) {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == g) return k;
  fail(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": unknown genotype '" + g + "'");
}

}  // namespace detail

template <class S>
CrossTable<S> parse_cross_table(std::string_view text) {
  CrossTable<S> t;
  std::vector<std::string> labels;
  std::vector<bool> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto tokens = detail::split_ws(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (tokens[0] == "female:" || tokens[0] == "male:") {
      auto& dst = tokens[0] == "female:" ? t.female_types : t.male_types;
      if (!dst.empty())
        fail(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": duplicate sex header");
      dst.assign(tokens.begin() + 1, tokens.end());
      for (const auto& g : dst)
        if (g.find(':') != std::string::npos)
          fail(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": bad genotype '" + g + "'");
      continue;
    }
    if (tokens[0] != "cross")
      fail(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": expected 'cross'");
    if (t.female_types.empty() || t.male_types.empty())
      fail(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": cross before sex headers");
    if (labels.empty()) {
      labels = t.female_types;
      labels.insert(labels.end(), t.male_types.begin(), t.male_types.end());
      t.rows.assign(t.female_count() * t.male_count(),
                    std::vector<S>(labels.size(), S{}));
      seen.assign(t.rows.size(), false);
    }
    if (tokens.size() < 5 || tokens[2] != "x" || tokens[4] != "->")
      fail(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": malformed cross line");
    std::size_t i = detail::label_index(t.female_types, tokens[1], line_no);
    std::size_t j = detail::label_index(t.male_types, tokens[3], line_no);
    std::size_t r = i * t.male_count() + j;
    if (seen[r])
      fail(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": duplicate cross");
    seen[r] = true;
    for (std::size_t k = 5; k < tokens.size(); ++k) {
      auto colon = tokens[k].find(':');
      if (colon == std::string::npos)
        fail(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": expected genotype:prob");
      std::size_t col = detail::label_index(labels, tokens[k].substr(0, colon), line_no);
      t.rows[r][col] = parse_scalar<S>(std::string_view(tokens[k]).substr(colon + 1));
    }
  }
  for (std::size_t r = 0; r < seen.size(); ++r)
    if (!seen[r]) fail(ErrorCode::BadInput, "missing cross row " + std::to_string(r));
  if (t.rows.empty()) fail(ErrorCode::BadInput, "no cross rows found");
  validate_cross_table(t);
  return t;
}

}  // namespace gonosim
