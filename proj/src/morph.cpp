// Copyright 2026 The qeforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qeforge/morph.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "qeforge/errors.hpp"
#include "qeforge/text.hpp"

namespace qeforge::morph {

namespace {

bool is_affix_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?': case '"':
    case '\'': case '(': case ')':
      return true;
    default:
      return false;
  }
}

struct TokenParts {
  std::string_view prefix;
  std::string_view core;
  std::string_view suffix;
};

TokenParts split_token(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && is_affix_punct(token[b])) ++b;
  while (e > b && is_affix_punct(token[e - 1])) --e;
  return {token.substr(0, b), token.substr(b, e - b), token.substr(e)};
}

std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "m" || s == "masc" || s == "masculine") return Gender::kMasculine;
  if (s == "f" || s == "fem" || s == "feminine") return Gender::kFeminine;
  if (s == "none" || s == "-" || s == "n") return Gender::kNone;
  return std::nullopt;
}

std::optional<Number> parse_number(std::string_view s) {
  if (s == "sg" || s == "singular") return Number::kSingular;
  if (s == "pl" || s == "plural") return Number::kPlural;
  if (s == "none" || s == "-" || s == "n") return Number::kNone;
  return std::nullopt;
}

std::vector<Features> single_flips(Features f) {
  std::vector<Features> out;
  if (f.gender != Gender::kNone)
    out.push_back({f.gender == Gender::kMasculine ? Gender::kFeminine
                                                  : Gender::kMasculine,
                   f.number});
  if (f.number != Number::kNone)
    out.push_back({f.gender, f.number == Number::kSingular ? Number::kPlural
                                                           : Number::kSingular});
  return out;
}

std::size_t sites_capacity(const std::vector<std::size_t>& per_site, int n) {
  if (n == 1) {
    std::size_t total = 0;
    for (auto a : per_site) total += a;
    return total;
  }
  // Sum over unordered site pairs of a_i * a_j.
  std::size_t total = 0;
  std::size_t prefix = 0;
  for (auto a : per_site) {
    total += prefix * a;
    prefix += a;
  }
  return total;
}

}  // namespace

std::string to_string(Features f) {
  std::string out;
  out += f.gender == Gender::kMasculine  ? "m"
         : f.gender == Gender::kFeminine ? "f"
                                         : "none";
  out += '.';
  out += f.number == Number::kSingular ? "sg"
         : f.number == Number::kPlural ? "pl"
                                       : "none";
  return out;
}

std::optional<Features> parse_features(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  auto g = parse_gender(text.substr(0, dot));
  auto n = parse_number(text.substr(dot + 1));
  if (!g || !n) return std::nullopt;
  return Features{*g, *n};
}

std::vector<Alternative> alternatives(const MorphEntry& entry) {
  std::vector<Alternative> out;
  std::set<std::string> seen;
  for (Features f : single_flips(entry.features)) {
    auto it = entry.variants.find(f);
    if (it == entry.variants.end() || it->second == entry.surface) continue;
    if (seen.insert(it->second).second) out.push_back({f, it->second});
  }
  return out;
}

void MorphLexicon::add(MorphEntry entry) {
  if (entry.surface.empty())
    throw InvariantViolation("lexicon entry with empty surface");
  auto own = entry.variants.find(entry.features);
  if (own == entry.variants.end()) {
    entry.variants[entry.features] = entry.surface;
  } else if (own->second != entry.surface) {
    throw InvariantViolation("lexicon entry '" + entry.surface +
                             "' lists a different form for its own slot " +
                             to_string(entry.features));
  }
  if (entry.variants.size() < 2)
    throw InvariantViolation("lexicon entry '" + entry.surface +
                             "' has no variant besides itself");
  entries_.try_emplace(entry.surface, std::move(entry));
}

const MorphEntry* MorphLexicon::find(std::string_view surface) const {
  auto it = entries_.find(std::string(surface));
  return it == entries_.end() ? nullptr : &it->second;
}

MorphLexicon MorphLexicon::parse(std::string_view content,
                                 const std::string& name) {
  MorphLexicon lex;
  std::size_t row = 0;
  for (auto line : text::split(content, '\n')) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::is_blank(line) || text::trim(line).front() == '#') continue;
    auto cells = text::split(line, '\t');
    if (cells.size() < 4)
      throw ParseError(name, row, "lexicon rows need at least 4 columns");
    MorphEntry entry;
    entry.surface = std::string(text::trim(cells[0]));
    auto g = parse_gender(text::trim(cells[1]));
    auto n = parse_number(text::trim(cells[2]));
    if (!g) throw ParseError(name, row, "unknown gender '" + std::string(cells[1]) + "'");
    if (!n) throw ParseError(name, row, "unknown number '" + std::string(cells[2]) + "'");
    entry.features = {*g, *n};
    for (std::size_t c = 3; c < cells.size(); ++c) {
      for (auto pair : text::split(cells[c], ',')) {
        pair = text::trim(pair);
        if (pair.empty()) continue;
        auto eq = pair.find('=');
        if (eq == std::string_view::npos)
          throw ParseError(name, row, "variant '" + std::string(pair) +
                                          "' is not gender.number=form");
        auto f = parse_features(pair.substr(0, eq));
        auto form = text::trim(pair.substr(eq + 1));
        if (!f || form.empty())
          throw ParseError(name, row, "bad variant '" + std::string(pair) + "'");
        entry.variants[*f] = std::string(form);
      }
    }
    try {
      lex.add(std::move(entry));
    } catch (const InvariantViolation& e) {
      throw ParseError(name, row, e.what());
    }
  }
  return lex;
}

MorphLexicon MorphLexicon::load(const std::string& path) {
  return parse(text::read_file(path), path);
}

std::vector<std::string> word_tokens(std::string_view text) {
  return text::split_whitespace(text);
}

std::vector<InjectionSite> find_injection_sites(
    const std::vector<std::string>& tokens, const MorphLexicon& lex) {
  std::vector<InjectionSite> sites;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const MorphEntry* entry = lex.find(split_token(tokens[i]).core);
    if (entry && !alternatives(*entry).empty()) sites.push_back({i, entry});
  }
  return sites;
}

std::size_t variant_capacity(const std::vector<std::string>& tokens,
                             const MorphLexicon& lex, int n) {
  std::vector<std::size_t> per_site;
  for (const auto& site : find_injection_sites(tokens, lex))
    per_site.push_back(alternatives(*site.entry).size());
  return sites_capacity(per_site, n);
}

ScoredSegment inject_errors(const ScoredSegment& seg, int n,
                            const MorphLexicon& lex, Rng& rng,
                            std::size_t ordinal) {
  if (n != 1 && n != 2)
    throw InvalidArgument("agreement errors per variant must be 1 or 2");
  if (seg.score_value() < 2)
    throw ScoreTooLow("segment '" + seg.id.str() + "' has score " +
                      std::to_string(seg.score_value()) + "; need >= 2");
  auto tokens = word_tokens(seg.target);
  auto sites = find_injection_sites(tokens, lex);
  if (sites.size() < static_cast<std::size_t>(n))
    throw InsufficientSites(n, sites.size());

  auto picks = rng.sample_indices(sites.size(), static_cast<std::size_t>(n));
  std::sort(picks.begin(), picks.end());
  for (std::size_t p : picks) {
    const auto& site = sites[p];
    auto alts = alternatives(*site.entry);
    const auto& alt = alts[rng.index(alts.size())];
    auto parts = split_token(tokens[site.position]);
    tokens[site.position] =
        std::string(parts.prefix) + alt.form + std::string(parts.suffix);
  }

  ScoredSegment out;
  out.id = derived_id(seg.id, n == 1 ? "morph1" : "morph2", ordinal);
  out.source = seg.source;
  out.target = text::join(tokens, " ");
  out.score = QualityScore(clamp_penalized(seg.score_value(), n));
  out.origin = Origin::kMorphError;
  out.parent = seg.id;
  out.error_count = n;
  return out;
}

MorphPlan parse_plan(std::string_view spec) {
  MorphPlan plan;
  for (auto item : text::split(spec, ',')) {
    item = text::trim(item);
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw InvalidArgument("plan item '" + std::string(item) +
                            "' is not errors:count");
    auto level = text::parse_int(item.substr(0, colon));
    if (!level || (*level != 1 && *level != 2))
      throw InvalidArgument("plan error level must be 1 or 2");
    auto count_text = item.substr(colon + 1);
    if (count_text == "*") {
      plan.counts[static_cast<int>(*level)] = std::nullopt;
    } else {
      auto count = text::parse_int(count_text);
      if (!count || *count < 0)
        throw InvalidArgument("plan count '" + std::string(count_text) +
                              "' is not a non-negative integer");
      plan.counts[static_cast<int>(*level)] = static_cast<std::size_t>(*count);
    }
  }
  return plan;
}

std::string to_string(const MorphPlan& plan) {
  std::string out;
  for (const auto& [level, count] : plan.counts) {
    if (!out.empty()) out += ',';
    out += std::to_string(level) + ":" +
           (count ? std::to_string(*count) : std::string("*"));
  }
  return out;
}

Dataset augment_corpus(const Dataset& segs, const MorphLexicon& lex,
                       const MorphPlan& plan, std::uint64_t seed) {
  // variants[i][level] for input record i.
  std::vector<std::map<int, Dataset>> variants(segs.size());

  for (const auto& [level, requested] : plan.counts) {
    if (level != 1 && level != 2)
      throw InvalidArgument("plan error level must be 1 or 2");
    std::vector<std::size_t> eligible;
    std::vector<std::size_t> capacity(segs.size(), 0);
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (!segs[i].score || segs[i].score->value() < 2) continue;
      capacity[i] = variant_capacity(word_tokens(segs[i].target), lex, level);
      if (capacity[i] > 0) eligible.push_back(i);
    }
    std::size_t total_capacity = 0;
    for (auto i : eligible) total_capacity += capacity[i];
    const std::size_t want = requested.value_or(eligible.size());
    if (want > total_capacity) throw PlanInfeasible(level, want, total_capacity);
    if (want == 0) continue;

    Rng order_rng(derive_seed(seed, {"augment-morph", "order", std::to_string(level)}));
    order_rng.shuffle(eligible);

    std::vector<std::size_t> quota(segs.size(), 0);
    std::size_t assigned = 0;
    while (assigned < want) {
      for (auto i : eligible) {
        if (assigned == want) break;
        if (quota[i] < capacity[i]) {
          ++quota[i];
          ++assigned;
        }
      }
    }

    for (auto i : eligible) {
      if (quota[i] == 0) continue;
      const auto& seg = segs[i];
      Rng rng(derive_seed(seed, {"augment-morph", seg.id.str(),
                                 std::to_string(level)}));
      std::unordered_set<std::string> seen;
      Dataset& out = variants[i][level];
      while (out.size() < quota[i]) {
        auto v = inject_errors(seg, level, lex, rng, out.size());
        if (seen.insert(v.target).second) out.push_back(std::move(v));
      }
    }
  }

  Dataset result;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    result.push_back(segs[i]);
    for (auto& [level, vs] : variants[i])
      for (auto& v : vs) result.push_back(std::move(v));
  }
  return result;
}

int agreement_conflicts(const std::vector<std::string>& tokens,
                        const MorphLexicon& lex) {
  int masc = 0, fem = 0, sg = 0, pl = 0;
  for (const auto& t : tokens) {
    const MorphEntry* e = lex.find(split_token(t).core);
    if (!e) continue;
    if (e->features.gender == Gender::kMasculine) ++masc;
    if (e->features.gender == Gender::kFeminine) ++fem;
    if (e->features.number == Number::kSingular) ++sg;
    if (e->features.number == Number::kPlural) ++pl;
  }
  return std::min(masc, fem) + std::min(sg, pl);
}

}  // namespace qeforge::morph
