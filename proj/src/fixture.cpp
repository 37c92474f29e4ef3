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

#include "qeforge/fixture.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <set>

#include "qeforge/errors.hpp"
#include "qeforge/random.hpp"
#include "qeforge/text.hpp"

namespace qeforge::fixture {

namespace {

struct Noun {
  const char* en_sg;
  const char* en_pl;
  const char* he_sg;
  const char* he_pl;
  char gender;  // 'm' or 'f'
};

// Four inflected forms in the order m.sg, f.sg, m.pl, f.pl.
struct Inflected {
  const char* en;
  const char* en_alt;  // verbs: plural-subject form
  std::array<const char*, 4> he;
};

struct Invariant {
  const char* en;
  const char* he;
};

constexpr Noun kNouns[] = {
    {"dog", "dogs", "כלב", "כלבים", 'm'},
    {"cat", "cats", "חתול", "חתולים", 'm'},
    {"boy", "boys", "ילד", "ילדים", 'm'},
    {"girl", "girls", "ילדה", "ילדות", 'f'},
    {"student", "students", "תלמיד", "תלמידים", 'm'},
    {"teacher", "teachers", "מורה", "מורות", 'f'},
    {"horse", "horses", "סוס", "סוסים", 'm'},
    {"bird", "birds", "ציפור", "ציפורים", 'f'},
    {"neighbor", "neighbors", "שכנה", "שכנות", 'f'},
    {"soldier", "soldiers", "חייל", "חיילים", 'm'},
    {"singer", "singers", "זמרת", "זמרות", 'f'},
    {"doctor", "doctors", "רופאה", "רופאות", 'f'},
    {"worker", "workers", "פועל", "פועלים", 'm'},
    {"woman", "women", "אישה", "נשים", 'f'},
    {"man", "men", "איש", "אנשים", 'm'},
    {"cow", "cows", "פרה", "פרות", 'f'},
    {"friend", "friends", "חבר", "חברים", 'm'},
    {"nurse", "nurses", "אחות", "אחיות", 'f'},
};

constexpr Inflected kAdjectives[] = {
    {"big", "", {"גדול", "גדולה", "גדולים", "גדולות"}},
    {"small", "", {"קטן", "קטנה", "קטנים", "קטנות"}},
    {"new", "", {"חדש", "חדשה", "חדשים", "חדשות"}},
    {"old", "", {"זקן", "זקנה", "זקנים", "זקנות"}},
    {"tall", "", {"גבוה", "גבוהה", "גבוהים", "גבוהות"}},
    {"happy", "", {"שמח", "שמחה", "שמחים", "שמחות"}},
    {"tired", "", {"עייף", "עייפה", "עייפים", "עייפות"}},
    {"young", "", {"צעיר", "צעירה", "צעירים", "צעירות"}},
    {"quiet", "", {"שקט", "שקטה", "שקטים", "שקטות"}},
    {"wise", "", {"חכם", "חכמה", "חכמים", "חכמות"}},
    {"strong", "", {"חזק", "חזקה", "חזקים", "חזקות"}},
    {"hungry", "", {"רעב", "רעבה", "רעבים", "רעבות"}},
};

constexpr Inflected kVerbs[] = {
    {"runs", "run", {"רץ", "רצה", "רצים", "רצות"}},
    {"walks", "walk", {"הולך", "הולכת", "הולכים", "הולכות"}},
    {"sings", "sing", {"שר", "שרה", "שרים", "שרות"}},
    {"plays", "play", {"משחק", "משחקת", "משחקים", "משחקות"}},
    {"eats", "eat", {"אוכל", "אוכלת", "אוכלים", "אוכלות"}},
    {"sleeps", "sleep", {"ישן", "ישנה", "ישנים", "ישנות"}},
    {"works", "work", {"עובד", "עובדת", "עובדים", "עובדות"}},
    {"reads", "read", {"קורא", "קוראת", "קוראים", "קוראות"}},
    {"writes", "write", {"כותב", "כותבת", "כותבים", "כותבות"}},
    {"dances", "dance", {"רוקד", "רוקדת", "רוקדים", "רוקדות"}},
    {"laughs", "laugh", {"צוחק", "צוחקת", "צוחקים", "צוחקות"}},
    {"sits", "sit", {"יושב", "יושבת", "יושבים", "יושבות"}},
};

constexpr Invariant kAdverbs[] = {
    {"quickly", "מהר"}, {"slowly", "לאט"},    {"quietly", "בשקט"},
    {"today", "היום"},  {"again", "שוב"},     {"happily", "בשמחה"},
    {"together", "יחד"},
};

constexpr Invariant kPlaces[] = {
    {"in the park", "בפארק"},     {"at home", "בבית"},
    {"in the garden", "בגינה"},   {"near the river", "ליד הנהר"},
    {"in the city", "בעיר"},      {"on the beach", "בחוף"},
};

constexpr const char* kFormula = "$\\hat{a}64 = 8$";

std::size_t slot(char gender, bool plural) {
  return (gender == 'f' ? 1u : 0u) + (plural ? 2u : 0u);
}

template <typename T, std::size_t N>
const T& pick(const T (&items)[N], Rng& rng) {
  return items[rng.index(N)];
}

enum class Kind { kNoun, kAdjective, kVerb, kOther };

struct Token {
  std::string text;
  Kind kind = Kind::kOther;
  std::size_t item = 0;     // index into the table for kind
  std::string prefix;       // ה or ו
  std::size_t form = 0;     // slot for inflected words, 0/1 = sg/pl for nouns
};

struct Sentence {
  std::string english;
  std::vector<Token> hebrew;
};

Token noun_token(std::size_t i, bool plural) {
  const auto& n = kNouns[i];
  return {std::string("ה") + (plural ? n.he_pl : n.he_sg), Kind::kNoun, i, "ה",
          plural ? 1u : 0u};
}

Token inflected_token(Kind kind, std::size_t i, std::size_t form,
                      std::string prefix) {
  const auto& table = kind == Kind::kAdjective ? kAdjectives[i] : kVerbs[i];
  return {prefix + table.he[form], kind, i, prefix, form};
}

Token plain(std::string text) {
  Token t;
  t.text = std::move(text);
  return t;
}

void push_words(std::vector<Token>& out, std::string_view he) {
  for (auto w : text::split_whitespace(he)) out.push_back(plain(std::string(w)));
}

Sentence generate(Rng& rng) {
  const std::size_t ni = rng.index(std::size(kNouns));
  const auto& noun = kNouns[ni];
  const bool plural = rng.bernoulli(0.4);
  const std::size_t form = slot(noun.gender, plural);
  const std::size_t ai = rng.index(std::size(kAdjectives));
  const std::size_t vi = rng.index(std::size(kVerbs));
  const auto& adv = pick(kAdverbs, rng);
  const auto& place = pick(kPlaces, rng);
  const std::string en_noun = plural ? noun.en_pl : noun.en_sg;
  const std::string en_verb = plural ? kVerbs[vi].en_alt : kVerbs[vi].en;

  Sentence s;
  const double t = rng.unit();
  if (t < 0.2) {
    s.english = "The " + en_noun + " " + en_verb + " " + adv.en + ".";
    s.hebrew.push_back(noun_token(ni, plural));
    s.hebrew.push_back(inflected_token(Kind::kVerb, vi, form, ""));
    push_words(s.hebrew, adv.he);
  } else if (t < 0.6) {
    s.english = "The " + std::string(kAdjectives[ai].en) + " " + en_noun +
                " " + en_verb + " " + adv.en + " " + place.en + ".";
    s.hebrew.push_back(noun_token(ni, plural));
    s.hebrew.push_back(inflected_token(Kind::kAdjective, ai, form, "ה"));
    s.hebrew.push_back(inflected_token(Kind::kVerb, vi, form, ""));
    push_words(s.hebrew, adv.he);
    push_words(s.hebrew, place.he);
  } else if (t < 0.8) {
    s.english = "Every day the " + std::string(kAdjectives[ai].en) + " " +
                en_noun + " " + en_verb + " " + place.en + ".";
    push_words(s.hebrew, "כל יום");
    s.hebrew.push_back(noun_token(ni, plural));
    s.hebrew.push_back(inflected_token(Kind::kAdjective, ai, form, "ה"));
    s.hebrew.push_back(inflected_token(Kind::kVerb, vi, form, ""));
    push_words(s.hebrew, place.he);
  } else {
    std::size_t v2 = rng.index(std::size(kVerbs) - 1);
    if (v2 >= vi) ++v2;
    const auto& adv2 = pick(kAdverbs, rng);
    const std::string en_verb2 = plural ? kVerbs[v2].en_alt : kVerbs[v2].en;
    s.english = "The " + std::string(kAdjectives[ai].en) + " " + en_noun +
                " " + en_verb + " " + adv.en + " " + place.en + " and " +
                en_verb2 + " " + adv2.en + ".";
    s.hebrew.push_back(noun_token(ni, plural));
    s.hebrew.push_back(inflected_token(Kind::kAdjective, ai, form, "ה"));
    s.hebrew.push_back(inflected_token(Kind::kVerb, vi, form, ""));
    push_words(s.hebrew, adv.he);
    push_words(s.hebrew, place.he);
    s.hebrew.push_back(inflected_token(Kind::kVerb, v2, form, "ו"));
    push_words(s.hebrew, adv2.he);
  }
  return s;
}

std::string render(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out + ".";
}

// One systematic error: an agreement slip, a wrong word, a dropped word or an
// untranslated English word. Returns false when nothing applicable is left.
bool apply_error(std::vector<Token>& tokens, std::set<std::size_t>& touched,
                 Rng& rng) {
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (!touched.count(i)) open.push_back(i);
  if (open.empty()) return false;

  for (int attempt = 0; attempt < 8; ++attempt) {
    const std::size_t kind = rng.index(4);
    const std::size_t pos = open[rng.index(open.size())];
    Token& tok = tokens[pos];
    switch (kind) {
      case 0: {  // agreement: flip gender or number on an inflected word
        if (tok.kind != Kind::kAdjective && tok.kind != Kind::kVerb) break;
        const std::size_t flipped = tok.form ^ (rng.bernoulli(0.5) ? 1u : 2u);
        tok = inflected_token(tok.kind, tok.item, flipped, tok.prefix);
        touched.insert(pos);
        return true;
      }
      case 1: {  // lexical: a different word of the same class
        if (tok.kind == Kind::kNoun) {
          const char g = kNouns[tok.item].gender;
          std::vector<std::size_t> same;
          for (std::size_t i = 0; i < std::size(kNouns); ++i)
            if (i != tok.item && kNouns[i].gender == g) same.push_back(i);
          tok = noun_token(same[rng.index(same.size())], tok.form == 1);
        } else if (tok.kind == Kind::kAdjective || tok.kind == Kind::kVerb) {
          const std::size_t n =
              tok.kind == Kind::kAdjective ? std::size(kAdjectives) : std::size(kVerbs);
          std::size_t other = rng.index(n - 1);
          if (other >= tok.item) ++other;
          tok = inflected_token(tok.kind, other, tok.form, tok.prefix);
        } else {
          std::string other = pick(kAdverbs, rng).he;
          if (other == tok.text) break;
          tok = plain(other);
        }
        touched.insert(pos);
        return true;
      }
      case 2: {  // omission of a non-head word
        if (tok.kind == Kind::kNoun || tokens.size() <= 3) break;
        tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(pos));
        std::set<std::size_t> shifted;
        for (auto t : touched) shifted.insert(t > pos ? t - 1 : t);
        touched = std::move(shifted);
        return true;
      }
      default: {  // left untranslated
        if (tok.kind != Kind::kNoun) break;
        tok = plain(kNouns[tok.item].en_sg);
        touched.insert(pos);
        return true;
      }
    }
  }
  return false;
}

std::size_t draw_error_count(Rng& rng) {
  static constexpr std::array<double, 5> kWeights = {0.30, 0.22, 0.18, 0.15,
                                                     0.15};
  double u = rng.unit();
  for (std::size_t k = 0; k < kWeights.size(); ++k) {
    if (u < kWeights[k]) return k;
    u -= kWeights[k];
  }
  return kWeights.size() - 1;
}

std::string splice_formula(const std::string& sentence) {
  // Inserted before the final period.
  return sentence.substr(0, sentence.size() - 1) + " " + kFormula + ".";
}

const char* gender_code(std::size_t form) { return form % 2 ? "f" : "m"; }
const char* number_code(std::size_t form) { return form >= 2 ? "pl" : "sg"; }

std::string build_lexicon() {
  std::string out = "# surface\tgender\tnumber\tvariants\n";
  std::set<std::string> seen;
  auto row = [&](const std::string& surface, const char* g, const char* n,
                 const std::vector<std::string>& variants) {
    if (!seen.insert(surface).second) return;
    out += surface;
    out += '\t';
    out += g;
    out += '\t';
    out += n;
    for (const auto& v : variants) {
      out += '\t';
      out += v;
    }
    out += '\n';
  };
  for (const char* prefix : {"", "ה"}) {
    for (const auto& n : kNouns) {
      const std::string g(1, n.gender);
      const std::string sg = prefix + std::string(n.he_sg);
      const std::string pl = prefix + std::string(n.he_pl);
      row(sg, g.c_str(), "sg", {g + ".pl=" + pl});
      row(pl, g.c_str(), "pl", {g + ".sg=" + sg});
    }
  }
  auto inflected = [&](const Inflected& w, const std::string& prefix) {
    for (std::size_t f = 0; f < 4; ++f) {
      std::vector<std::string> variants;
      for (std::size_t o = 0; o < 4; ++o)
        if (o != f)
          variants.push_back(std::string(gender_code(o)) + "." + number_code(o) +
                             "=" + prefix + w.he[o]);
      row(prefix + w.he[f], gender_code(f), number_code(f), variants);
    }
  };
  for (const char* prefix : {"", "ה"})
    for (const auto& a : kAdjectives) inflected(a, prefix);
  for (const char* prefix : {"", "ו"})
    for (const auto& v : kVerbs) inflected(v, prefix);
  return out;
}

std::string build_glossary() {
  std::map<std::string, std::set<std::string>> g;
  for (const auto& n : kNouns) {
    for (const char* p : {"", "ה"}) {
      for (const char* word : {n.en_sg, n.en_pl}) {
        g[word].insert(p + std::string(n.he_sg));
        g[word].insert(p + std::string(n.he_pl));
      }
    }
  }
  auto inflected = [&](const Inflected& w, std::initializer_list<const char*> prefixes) {
    for (const char* p : prefixes)
      for (const char* form : w.he)
        for (const char* word : {w.en, w.en_alt})
          if (*word) g[word].insert(p + std::string(form));
  };
  for (const auto& a : kAdjectives) inflected(a, {"", "ה"});
  for (const auto& v : kVerbs) inflected(v, {"", "ו"});
  for (const auto& a : kAdverbs) g[a.en].insert(a.he);
  for (const auto& p : kPlaces) {
    const auto en = text::split_whitespace(p.en);
    const auto he = text::split_whitespace(p.he);
    for (const auto& w : he) g[std::string(en.back())].insert(std::string(w));
    if (en.front() == "near") g["near"].insert("ליד");
  }
  g["every"].insert("כל");
  g["day"].insert("יום");

  std::string out;
  for (const auto& [word, forms] : g) {
    out += word;
    out += '\t';
    bool first = true;
    for (const auto& f : forms) {
      if (!first) out += ' ';
      out += f;
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::string pairs_to_tsv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string out;
  for (const auto& [a, b] : rows) out += a + "\t" + b + "\n";
  return out;
}

std::vector<std::string> comparable_tokens(std::string_view sentence) {
  std::vector<std::string> out;
  for (auto w : text::split_whitespace(sentence)) {
    while (!w.empty() && (w.back() == '.' || w.back() == ',')) w.pop_back();
    if (!w.empty()) out.emplace_back(w);
  }
  return out;
}

}  // namespace

Fixture make_fixture(const FixtureConfig& config) {
  if (config.sentences == 0)
    throw InvalidArgument("fixture needs at least one sentence");
  if (config.flagged_share < 0.0 || config.flagged_share > 1.0)
    throw InvalidArgument("flagged_share must be within [0, 1]");

  Fixture fx;
  std::set<std::string> used;
  Rng grammar(derive_seed(config.seed, {"fixture", "grammar"}));
  auto fresh = [&]() {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      Sentence s = generate(grammar);
      if (used.insert(s.english).second) return s;
    }
    throw InvalidArgument("fixture grammar cannot produce that many sentences");
  };

  Rng flags(derive_seed(config.seed, {"fixture", "flagged"}));
  for (std::size_t i = 0; i < config.sentences; ++i) {
    Sentence s = fresh();
    std::string gold = render(s.hebrew);
    std::string source = s.english;

    Rng err(derive_seed(config.seed, {"fixture", "errors", source}));
    auto tokens = s.hebrew;
    std::set<std::size_t> touched;
    const std::size_t k = draw_error_count(err);
    for (std::size_t e = 0; e < k; ++e)
      if (!apply_error(tokens, touched, err)) break;
    std::string base = render(tokens);

    if (flags.bernoulli(config.flagged_share)) {
      source = splice_formula(source);
      gold = splice_formula(gold);
      base = splice_formula(base);
    }
    fx.sentences.push_back(source);
    fx.gold.emplace_back(source, gold);
    fx.engine_base.emplace_back(source, base);
  }

  for (std::size_t i = 0; i < config.professional; ++i) {
    Sentence s = fresh();
    fx.professional.emplace_back(s.english, render(s.hebrew));
  }

  Rng usage(derive_seed(config.seed, {"fixture", "usage"}));
  for (std::size_t i = 0; i < config.usage_examples; ++i) {
    Sentence s = generate(usage);
    switch (usage.index(3)) {
      case 0:
        fx.usage_examples.push_back({pick(kNouns, usage).en_sg, "noun", s.english});
        break;
      case 1:
        fx.usage_examples.push_back(
            {pick(kAdjectives, usage).en, "adjective", s.english});
        break;
      default:
        fx.usage_examples.push_back({pick(kVerbs, usage).en_alt, "verb", s.english});
        break;
    }
  }

  fx.engines = {
      {{"alpha", 0}, {0.02, 0, false}},
      {{"beta", 1}, {0.04, 0, false}},
      {{"gamma", 2}, {0.12, 9, false}},
  };
  fx.lexicon_tsv = build_lexicon();
  fx.glossary_tsv = build_glossary();
  return fx;
}

void write_fixture(const Fixture& fx, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto path = [&](std::string_view name) { return (fs::path(dir) / name).string(); };

  std::string sentences;
  for (const auto& s : fx.sentences) sentences += s + "\n";
  std::string usage;
  for (const auto& u : fx.usage_examples)
    usage += u.headword + "\t" + u.part_of_speech + "\t" + u.example_sentence + "\n";

  text::write_file_atomic(path(kSentencesFile), sentences);
  text::write_file_atomic(path(kEngineBaseFile), pairs_to_tsv(fx.engine_base));
  text::write_file_atomic(path(kGoldFile), pairs_to_tsv(fx.gold));
  text::write_file_atomic(path(kProfessionalFile), pairs_to_tsv(fx.professional));
  text::write_file_atomic(path(kUsageExamplesFile), usage);
  text::write_file_atomic(path(kEnginesFile), engines_to_text(fx.engines));
  text::write_file_atomic(path(kLexiconFile), fx.lexicon_tsv);
  text::write_file_atomic(path(kGlossaryFile), fx.glossary_tsv);
}

Fixture read_fixture(const std::string& dir) {
  namespace fs = std::filesystem;
  auto path = [&](std::string_view name) { return (fs::path(dir) / name).string(); };
  Fixture fx;
  fx.sentences = ingest::read_sentences(path(kSentencesFile));
  fx.engine_base = ingest::read_parallel_tsv(path(kEngineBaseFile));
  fx.gold = ingest::read_parallel_tsv(path(kGoldFile));
  fx.professional = ingest::read_parallel_tsv(path(kProfessionalFile));
  fx.usage_examples = ingest::read_usage_examples(path(kUsageExamplesFile));
  fx.engines = parse_engines(text::read_file(path(kEnginesFile)), path(kEnginesFile));
  fx.lexicon_tsv = text::read_file(path(kLexiconFile));
  fx.glossary_tsv = text::read_file(path(kGlossaryFile));
  return fx;
}

std::vector<EngineSpec> parse_engines(std::string_view content,
                                      const std::string& name) {
  std::vector<EngineSpec> out;
  std::size_t row = 0;
  for (auto line : text::split(content, '\n')) {
    ++row;
    if (text::is_blank(line) || text::trim(line).front() == '#') continue;
    auto cells = text::split(line, '\t');
    if (cells.size() != 4)
      throw ParseError(name, row, "engine rows need name, priority, rate, drop_every");
    auto priority = text::parse_int(text::trim(cells[1]));
    auto rate = text::parse_double(text::trim(cells[2]));
    auto drop = text::parse_int(text::trim(cells[3]));
    if (!priority || !rate || !drop || *rate < 0.0 || *rate > 1.0 || *drop < 0)
      throw ParseError(name, row, "bad engine row");
    EngineSpec e;
    e.id = {std::string(text::trim(cells[0])), static_cast<int>(*priority)};
    e.behavior.substitution_rate = *rate;
    e.behavior.drop_every = static_cast<int>(*drop);
    out.push_back(std::move(e));
  }
  return out;
}

std::string engines_to_text(const std::vector<EngineSpec>& engines) {
  std::string out = "# name\tpriority\tsubstitution_rate\tdrop_every\n";
  for (const auto& e : engines)
    out += e.id.name + "\t" + std::to_string(e.id.priority) + "\t" +
           text::format_double(e.behavior.substitution_rate) + "\t" +
           std::to_string(e.behavior.drop_every) + "\n";
  return out;
}

ingest::MockTranslator make_translator(const Fixture& fx, std::uint64_t seed) {
  ingest::MockTranslator t(seed);
  for (const auto& e : fx.engines) t.set_behavior(e.id.name, e.behavior);
  for (const auto& [src, tgt] : fx.engine_base) t.add_reference(src, tgt);
  std::vector<std::string> pool;
  for (const auto& n : kNouns) pool.push_back(std::string("ה") + n.he_sg);
  for (const auto& a : kAdverbs) pool.push_back(a.he);
  t.set_substitution_pool(std::move(pool));
  return t;
}

std::size_t token_edit_distance(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

SimulatedAnnotator::SimulatedAnnotator(
    const std::vector<std::pair<std::string, std::string>>& gold,
    std::uint64_t seed, double noise)
    : gold_(gold.begin(), gold.end()), seed_(seed), noise_(noise) {
  if (noise < 0.0 || noise > 1.0)
    throw InvalidArgument("annotator noise must be within [0, 1]");
}

int SimulatedAnnotator::judge(const ScoredSegment& seg) const {
  auto it = gold_.find(seg.source);
  if (it == gold_.end())
    throw InvalidArgument("no gold reference for segment '" + seg.id.str() + "'");
  const auto d = token_edit_distance(comparable_tokens(seg.target),
                                     comparable_tokens(it->second));
  int score = 5 - static_cast<int>(std::min<std::size_t>(d, 4));
  Rng rng(derive_seed(seed_, {"annotator", seg.id.str()}));
  if (rng.bernoulli(noise_)) score += rng.bernoulli(0.5) ? 1 : -1;
  return std::clamp(score, 1, 5);
}

}  // namespace qeforge::fixture
