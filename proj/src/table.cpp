// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/table.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace reorder {

namespace {

std::string format_distribution_pair(const Distribution& l,
                                     const Distribution& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%.6f %.6f %.6f %.6f %.6f %.6f %.6f %.6f", l[0], l[1], l[2],
                l[3], r[0], r[1], r[2], r[3]);
  return buf;
}

std::string format_distribution(const Distribution& d) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f %.6f", d[0], d[1], d[2],
                d[3]);
  return buf;
}

Distribution parse_distribution(const std::string& text,
                                const std::string& context) {
  Distribution d;
  if (std::sscanf(text.c_str(), "%lf %lf %lf %lf", &d.p[0], &d.p[1], &d.p[2],
                  &d.p[3]) != 4)
    throw FormatError(context + ": bad distribution '" + text + "'");
  return d;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t sep = line.find(" ||| ", start);
    if (sep == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, sep - start));
    start = sep + 5;
  }
  return fields;
}

}  // namespace

void ReorderingTable::set(std::string key, TableEntry entry) {
  rows_[std::move(key)] = entry;
}

const TableEntry* ReorderingTable::find(std::string_view key) const {
  auto it = rows_.find(std::string(key));
  return it == rows_.end() ? nullptr : &it->second;
}

void ReorderingTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  if (meta.scheme) out << "#scheme: " << *meta.scheme << '\n';
  if (meta.sigma) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", *meta.sigma);
    out << "#sigma: " << buf << '\n';
  }
  if (meta.global_left)
    out << "#global-left: " << format_distribution(*meta.global_left) << '\n';
  if (meta.global_right)
    out << "#global-right: " << format_distribution(*meta.global_right) << '\n';
  std::vector<std::string> lines;
  lines.reserve(rows_.size());
  for (const auto& [key, entry] : rows_) {
    auto [src, tgt] = split_key(key);
    std::string line;
    line.append(src);
    line.append(" ||| ");
    line.append(tgt);
    line.append(" ||| ");
    line.append(format_distribution_pair(entry.left, entry.right));
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  for (const std::string& line : lines) out << line << '\n';
  if (!out) throw IoError("failed writing file: " + path);
}

ReorderingTable ReorderingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  ReorderingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string context = path + ":" + std::to_string(line_no);
    if (line[0] == '#') {
      std::size_t colon = line.find(": ");
      if (colon == std::string::npos)
        throw FormatError(context + ": bad header line '" + line + "'");
      std::string name = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 2);
      if (name == "scheme")
        table.meta.scheme = value;
      else if (name == "sigma")
        table.meta.sigma = std::stod(value);
      else if (name == "global-left")
        table.meta.global_left = parse_distribution(value, context);
      else if (name == "global-right")
        table.meta.global_right = parse_distribution(value, context);
      else
        throw FormatError(context + ": unknown header '" + name + "'");
      continue;
    }
    auto fields = split_fields(line);
    if (fields.size() != 3)
      throw FormatError(context + ": expected 3 '|||' fields");
    Distribution all[2];
    double v[8];
    if (std::sscanf(fields[2].c_str(), "%lf %lf %lf %lf %lf %lf %lf %lf",
                    &v[0], &v[1], &v[2], &v[3], &v[4], &v[5], &v[6],
                    &v[7]) != 8)
      throw FormatError(context + ": bad probability row '" + fields[2] + "'");
    for (int i = 0; i < 4; ++i) {
      all[0][i] = v[i];
      all[1][i] = v[4 + i];
    }
    table.rows_[make_key(fields[0], fields[1])] =
        TableEntry{all[0], all[1]};
  }
  return table;
}

const char* to_string(SmoothingScheme scheme) {
  switch (scheme) {
    case SmoothingScheme::Mle: return "mle";
    case SmoothingScheme::Dirichlet: return "dirichlet";
    case SmoothingScheme::RecMap: return "recmap";
    case SmoothingScheme::Backoff: return "backoff";
    case SmoothingScheme::RecBackoff: return "recbackoff";
    case SmoothingScheme::Pmlh: return "pmlh";
    case SmoothingScheme::Mmlh: return "mmlh";
    case SmoothingScheme::Lh: return "lh";
    case SmoothingScheme::LhSmoothed: return "lhsmoothed";
  }
  return "?";
}

std::optional<SmoothingScheme> smoothing_scheme_from(std::string_view name) {
  for (SmoothingScheme s :
       {SmoothingScheme::Mle, SmoothingScheme::Dirichlet, SmoothingScheme::RecMap,
        SmoothingScheme::Backoff, SmoothingScheme::RecBackoff,
        SmoothingScheme::Pmlh, SmoothingScheme::Mmlh, SmoothingScheme::Lh,
        SmoothingScheme::LhSmoothed})
    if (name == to_string(s)) return s;
  return std::nullopt;
}

bool is_generalizing(SmoothingScheme scheme) {
  return scheme == SmoothingScheme::Pmlh || scheme == SmoothingScheme::Mmlh ||
         scheme == SmoothingScheme::Lh || scheme == SmoothingScheme::LhSmoothed;
}

namespace {

GenScheme gen_scheme_for(const TrainConfig& cfg) {
  if (cfg.first_last_pos) return GenScheme::FirstLastPos;
  switch (cfg.scheme) {
    case SmoothingScheme::Pmlh: return GenScheme::Pmlh;
    case SmoothingScheme::Mmlh: return GenScheme::Mmlh;
    default: return GenScheme::Lh;  // Lh and LhSmoothed
  }
}

// A pseudo sentence covering exactly one phrase-pair type, built from
// its key and an internal alignment; lets instance-level operations run
// on table keys.
SentencePair key_instance(const std::string& key,
                          const LocalAlignment& alignment) {
  SentencePair sp;
  sp.src = key_side_tokens(key, false);
  sp.tgt = key_side_tokens(key, true);
  sp.links = alignment;
  return sp;
}

ReorderingTable build_generalized_rows(const CountTable& gen_counts,
                                       double sigma, double alpha_u,
                                       const std::string& scheme_name) {
  ReorderingTable table;
  Distribution global[2];
  for (Side side : kSides)
    global[static_cast<int>(side)] =
        global_distribution(gen_counts, side, alpha_u);
  for (const auto* kv : gen_counts.sorted_items()) {
    TableEntry entry;
    entry.left = dirichlet_smooth(kv->second.side[0], global[0], sigma);
    entry.right = dirichlet_smooth(kv->second.side[1], global[1], sigma);
    table.set(kv->first, entry);
  }
  table.meta.scheme = scheme_name;
  table.meta.sigma = sigma;
  table.meta.global_left = global[0];
  table.meta.global_right = global[1];
  return table;
}

}  // namespace

ReorderingTable build_table(const CountResult& counts, const TrainConfig& cfg,
                            const LambdaTable* lambdas) {
  const CountTable& table = counts.table;
  const SmoothingConfig& sc = cfg.smoothing;
  ReorderingTable out;

  Distribution global[2];
  for (Side side : kSides)
    global[static_cast<int>(side)] =
        global_distribution(table, side, sc.alpha_u);

  switch (cfg.scheme) {
    case SmoothingScheme::Mle: {
      for (const auto* kv : table.sorted_items())
        out.set(kv->first, TableEntry{mle_distribution(kv->second.side[0]),
                                      mle_distribution(kv->second.side[1])});
      break;
    }
    case SmoothingScheme::Dirichlet: {
      for (const auto* kv : table.sorted_items())
        out.set(kv->first,
                TableEntry{dirichlet_smooth(kv->second.side[0], global[0], sc.sigma),
                           dirichlet_smooth(kv->second.side[1], global[1], sc.sigma)});
      out.meta.sigma = sc.sigma;
      break;
    }
    case SmoothingScheme::RecMap: {
      // Marginal counts per source phrase and per target phrase.
      std::unordered_map<std::string, std::array<CountVector, 2>> src_marg,
          tgt_marg;
      for (const auto& [key, pc] : table.items()) {
        auto [src, tgt] = split_key(key);
        auto& sm = src_marg[std::string(src)];
        auto& tm = tgt_marg[std::string(tgt)];
        for (int s = 0; s < 2; ++s)
          for (int o = 0; o < 4; ++o) {
            sm[s][o] += pc.side[s][o];
            tm[s][o] += pc.side[s][o];
          }
      }
      for (const auto* kv : table.sorted_items()) {
        auto [src, tgt] = split_key(kv->first);
        const auto& sm = src_marg[std::string(src)];
        const auto& tm = tgt_marg[std::string(tgt)];
        TableEntry entry;
        for (Side side : kSides) {
          int s = static_cast<int>(side);
          ((side == Side::Left) ? entry.left : entry.right) =
              recursive_map_smooth(kv->second.side[s], sm[s], tm[s], global[s],
                                   sc);
        }
        out.set(kv->first, entry);
      }
      break;
    }
    case SmoothingScheme::Backoff: {
      if (!lambdas)
        throw ConfigError("backoff smoothing needs interpolation weights");
      DirichletBaseModel base(table, sc.sigma, sc.alpha_u);
      for (const auto* kv : table.sorted_items()) {
        const LocalAlignment* alignment = kv->second.dominant_alignment();
        TableEntry entry;
        if (!alignment) {
          entry.left = base.lookup(kv->first, Side::Left);
          entry.right = base.lookup(kv->first, Side::Right);
        } else {
          SentencePair sp = key_instance(kv->first, *alignment);
          PhrasePair pp{Span{1, sp.src_len()}, Span{1, sp.tgt_len()}};
          for (Side side : kSides) {
            Distribution d;
            if (lambdas->find(pp.m(), pp.n()))
              d = interpolated_backoff(sp, pp, side, *lambdas, base);
            else
              d = base.lookup(kv->first, side);  // all weight on the pair
            ((side == Side::Left) ? entry.left : entry.right) = d;
          }
        }
        out.set(kv->first, entry);
      }
      out.meta.sigma = sc.sigma;
      break;
    }
    case SmoothingScheme::RecBackoff: {
      RecursiveBackoffSmoother smoother(table, sc.alpha_backoff,
                                        {global[0], global[1]});
      for (const auto* kv : table.sorted_items())
        out.set(kv->first,
                TableEntry{smoother.distribution(kv->first, Side::Left),
                           smoother.distribution(kv->first, Side::Right)});
      break;
    }
    case SmoothingScheme::Pmlh:
    case SmoothingScheme::Mmlh:
    case SmoothingScheme::Lh: {
      GenScheme gs = gen_scheme_for(cfg);
      return build_generalized_rows(counts.gen.gen_counts, cfg.gen_sigma,
                                    sc.alpha_u, to_string(gs));
    }
    case SmoothingScheme::LhSmoothed: {
      for (const auto* kv : table.sorted_items()) {
        TableEntry entry;
        for (Side side : kSides) {
          int s = static_cast<int>(side);
          Distribution gen_dist = generalized_distribution(
              counts.gen, kv->first, side, global[s], cfg.gen_sigma);
          ((side == Side::Left) ? entry.left : entry.right) =
              generalized_prior_smooth(kv->second.side[s], gen_dist, sc.sigma);
        }
        out.set(kv->first, entry);
      }
      out.meta.scheme = "lhsmoothed";
      out.meta.sigma = sc.sigma;
      break;
    }
  }
  out.meta.global_left = global[0];
  out.meta.global_right = global[1];
  return out;
}

TrainOutput train_tables(CorpusReader& corpus, const TrainConfig& cfg,
                         const LambdaTable* lambdas, CorpusReader* heldout) {
  CounterConfig counter;
  counter.model = cfg.model;
  counter.max_len = cfg.max_len;
  counter.workers = cfg.workers;
  counter.record_alignments = cfg.scheme == SmoothingScheme::Backoff ||
                              cfg.scheme == SmoothingScheme::RecBackoff;
  if (is_generalizing(cfg.scheme)) counter.gen_scheme = gen_scheme_for(cfg);
  counter.allow_missing_parses = cfg.allow_missing_parses;

  TrainOutput output;
  output.counts = count_corpus(corpus, counter);

  if (cfg.scheme == SmoothingScheme::Backoff && !lambdas) {
    if (!heldout)
      throw ConfigError(
          "backoff smoothing needs --lambda weights or a --heldout corpus");
    DirichletBaseModel base(output.counts.table, cfg.smoothing.sigma,
                            cfg.smoothing.alpha_u);
    EmTrainResult em =
        fit_interpolation_weights(*heldout, cfg.model, cfg.max_len, base);
    output.lambdas = std::move(em.table);
    lambdas = &*output.lambdas;
  }

  output.table = build_table(output.counts, cfg, lambdas);
  if (cfg.scheme == SmoothingScheme::LhSmoothed) {
    GenScheme gs = gen_scheme_for(cfg);
    output.gen_table =
        build_generalized_rows(output.counts.gen.gen_counts, cfg.gen_sigma,
                               cfg.smoothing.alpha_u, to_string(gs));
  }
  return output;
}

}  // namespace reorder
