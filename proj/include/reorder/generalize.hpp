// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_GENERALIZE_HPP
#define REORDER_GENERALIZE_HPP

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "reorder/counts.hpp"
#include "reorder/types.hpp"

namespace reorder {

// How non-head words of a phrase are generalized. Exposed heads always
// stay lexical except under FirstLastPos, which ignores heads entirely
// and keeps just the POS tags of the border words.
enum class GenScheme { Pmlh, Mmlh, Lh, FirstLastPos };

const char* to_string(GenScheme scheme);
std::optional<GenScheme> gen_scheme_from(std::string_view name);

// Tokens of the span whose dependency head lies outside the span or is
// ROOT. Never empty: a head-inside-only span would force a cycle.
std::vector<int> exposed_heads(Span span, const DependencyParse& parse);

// Word-by-word generalized form of the phrase at `span`.
// Pmlh: non-heads become their UPOS tag. Mmlh: maximal runs of
// non-heads collapse into one "<mod>". Lh: non-heads are dropped.
std::vector<std::string> generalize(const std::vector<std::string>& tokens,
                                    Span span, const DependencyParse& parse,
                                    GenScheme scheme);

std::string join_tokens(const std::vector<std::string>& tokens);

// Orientation counts keyed by generalized phrase-pair, plus the map
// from each lexical pair to the counts of its observed generalized
// forms (which sum to the pair's corpus frequency).
struct GeneralizationTable {
  CountTable gen_counts;
  std::unordered_map<std::string, std::map<std::string, std::uint64_t>> lex_to_gen;

  void merge(GeneralizationTable&& other);
  bool empty() const { return gen_counts.empty() && lex_to_gen.empty(); }
};

// Most frequently observed generalized form of a lexical pair; ties go
// to the lexicographically smaller serialized form. nullopt if the pair
// was never observed with a parse.
std::optional<std::string> dominant_generalization(
    const GeneralizationTable& table, std::string_view lex_key);

// Distribution of the pair's dominant generalized form, Dirichlet
// smoothed toward `global` with strength sigma. Falls back to `global`
// when the pair has no resolvable generalization; *used_fallback
// reports which case applied.
Distribution generalized_distribution(const GeneralizationTable& table,
                                      std::string_view lex_key, Side side,
                                      const Distribution& global, double sigma,
                                      bool* used_fallback = nullptr);

// Dirichlet smoothing of lexical counts with the generalized
// distribution as the prior: (C(o) + sigma * gen(o)) / (sum C + sigma).
Distribution generalized_prior_smooth(const CountVector& lexical_counts,
                                      const Distribution& generalized,
                                      double sigma);

}  // namespace reorder

#endif  // REORDER_GENERALIZE_HPP
