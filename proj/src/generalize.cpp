// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/generalize.hpp"

#include "reorder/smoothing.hpp"

namespace reorder {

const char* to_string(GenScheme scheme) {
  switch (scheme) {
    case GenScheme::Pmlh: return "pmlh";
    case GenScheme::Mmlh: return "mmlh";
    case GenScheme::Lh: return "lh";
    case GenScheme::FirstLastPos: return "2pos";
  }
  return "?";
}

std::optional<GenScheme> gen_scheme_from(std::string_view name) {
  if (name == "pmlh") return GenScheme::Pmlh;
  if (name == "mmlh") return GenScheme::Mmlh;
  if (name == "lh") return GenScheme::Lh;
  if (name == "2pos") return GenScheme::FirstLastPos;
  return std::nullopt;
}

std::vector<int> exposed_heads(Span span, const DependencyParse& parse) {
  std::vector<int> heads;
  for (int k = span.start; k <= span.end; ++k) {
    int h = parse.head(k);
    if (h < span.start || h > span.end) heads.push_back(k);
  }
  return heads;
}

std::vector<std::string> generalize(const std::vector<std::string>& tokens,
                                    Span span, const DependencyParse& parse,
                                    GenScheme scheme) {
  std::vector<std::string> out;
  if (scheme == GenScheme::FirstLastPos) {
    out.push_back(parse.pos(span.start));
    if (span.end != span.start) out.push_back(parse.pos(span.end));
    return out;
  }
  for (int k = span.start; k <= span.end; ++k) {
    int h = parse.head(k);
    bool exposed = h < span.start || h > span.end;
    if (exposed) {
      out.push_back(tokens[k - 1]);
      continue;
    }
    switch (scheme) {
      case GenScheme::Pmlh:
        out.push_back(parse.pos(k));
        break;
      case GenScheme::Mmlh:
        if (out.empty() || out.back() != kModPlaceholder)
          out.push_back(kModPlaceholder);
        break;
      case GenScheme::Lh:
      case GenScheme::FirstLastPos:  // handled above
        break;
    }
  }
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out.append(tokens[i]);
  }
  return out;
}

void GeneralizationTable::merge(GeneralizationTable&& other) {
  gen_counts.merge(std::move(other.gen_counts));
  for (auto& [lex, gens] : other.lex_to_gen) {
    auto& mine = lex_to_gen[lex];
    for (const auto& [gen, count] : gens) mine[gen] += count;
  }
  other.lex_to_gen.clear();
}

std::optional<std::string> dominant_generalization(
    const GeneralizationTable& table, std::string_view lex_key) {
  auto it = table.lex_to_gen.find(std::string(lex_key));
  if (it == table.lex_to_gen.end() || it->second.empty()) return std::nullopt;
  const std::string* best = nullptr;
  std::uint64_t best_count = 0;
  for (const auto& [gen, count] : it->second) {
    if (count > best_count) {  // map order breaks ties toward the smaller key
      best = &gen;
      best_count = count;
    }
  }
  if (!best) return std::nullopt;  // entries exist but carry no mass
  return *best;
}

Distribution generalized_distribution(const GeneralizationTable& table,
                                      std::string_view lex_key, Side side,
                                      const Distribution& global, double sigma,
                                      bool* used_fallback) {
  if (used_fallback) *used_fallback = false;
  auto gen_key = dominant_generalization(table, lex_key);
  const PairCounts* counts = gen_key ? table.gen_counts.find(*gen_key) : nullptr;
  if (!counts) {
    if (used_fallback) *used_fallback = true;
    return global;
  }
  return dirichlet_smooth(counts->side[static_cast<int>(side)], global, sigma);
}

Distribution generalized_prior_smooth(const CountVector& lexical_counts,
                                      const Distribution& generalized,
                                      double sigma) {
  return dirichlet_smooth(lexical_counts, generalized, sigma);
}

}  // namespace reorder
