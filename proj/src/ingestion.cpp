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

#include "qeforge/ingestion.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <future>
#include <set>

#include "qeforge/errors.hpp"
#include "qeforge/random.hpp"
#include "qeforge/text.hpp"

namespace qeforge::ingest {

namespace {

std::vector<std::string> split_row(const std::string& file, std::size_t row,
                                   std::string_view line, std::size_t columns) {
  auto cells = text::split(line, '\t');
  if (cells.size() != columns)
    throw ParseError(file, row,
                     "expected " + std::to_string(columns) + " columns, got " +
                         std::to_string(cells.size()));
  std::vector<std::string> out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto cell = text::trim(cells[c]);
    if (cell.empty())
      throw ParseError(file, row, "empty cell in column " + std::to_string(c + 1));
    out.emplace_back(cell);
  }
  return out;
}

void check_engines(const std::vector<TranslatorId>& engines) {
  if (engines.size() < 2)
    throw InvalidArgument("at least two engines are required");
  std::set<std::string> names;
  std::set<int> priorities;
  for (const auto& e : engines) {
    if (e.name.empty()) throw InvalidArgument("engine with empty name");
    if (e.priority < 0) throw InvalidArgument("negative engine priority");
    if (!names.insert(e.name).second)
      throw InvalidArgument("duplicate engine name '" + e.name + "'");
    if (!priorities.insert(e.priority).second)
      throw InvalidArgument("duplicate engine priority " +
                            std::to_string(e.priority));
  }
}

std::size_t trailing_punct(std::string_view word) {
  std::size_t n = 0;
  while (n < word.size()) {
    char c = word[word.size() - 1 - n];
    if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?')
      ++n;
    else
      break;
  }
  return n;
}

}  // namespace

void validate(const CandidateSet& set) {
  if (set.id.empty()) throw InvalidArgument("candidate set with empty id");
  if (text::is_blank(set.source))
    throw InvalidArgument("candidate set '" + set.id.str() +
                          "' has an empty source");
  std::vector<TranslatorId> engines;
  for (const auto& t : set.translations) engines.push_back(t.engine);
  check_engines(engines);
}

std::string build_generation_prompt(const UsageExample& ex, int min_words) {
  if (min_words < 1) throw InvalidArgument("min_words must be >= 1");
  const std::string words = min_words == 1 ? "word" : "words";
  // Slot order and punctuation (including the en dashes) are part of the
  // contract with downstream prompt tooling.
  return "Taken from high-school English learner's dictionary – the "
         "dictionary entry of the headword: \"" +
         ex.headword + "\", part-of-speech: \"" + ex.part_of_speech +
         "\", has the following example sentence: \"" + ex.example_sentence +
         "\" – suggest an additional sentence that contains at least " +
         std::to_string(min_words) + " " + words +
         " and that corresponds to the existing example sentence in terms of "
         "linguistic structure and academic level.";
}

void MockTranslator::set_behavior(const std::string& engine,
                                  MockEngineBehavior behavior) {
  behaviors_[engine] = behavior;
}

void MockTranslator::add_reference(std::string source, std::string target) {
  references_[std::move(source)] = std::move(target);
}

void MockTranslator::set_substitution_pool(std::vector<std::string> words) {
  substitution_pool_ = std::move(words);
}

std::string MockTranslator::translate(std::string_view engine,
                                      std::string_view source_text) const {
  MockEngineBehavior behavior;
  if (auto it = behaviors_.find(engine); it != behaviors_.end())
    behavior = it->second;
  if (behavior.fail)
    throw EngineFailure(std::string(engine), "mock engine configured to fail");

  std::string base(source_text);
  if (auto it = references_.find(base); it != references_.end())
    base = it->second;
  if (behavior.substitution_rate <= 0.0 && behavior.drop_every <= 0)
    return base;

  auto words = text::split_whitespace(base);
  std::vector<std::string> out;
  out.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (behavior.drop_every > 0 &&
        (i + 1) % static_cast<std::size_t>(behavior.drop_every) == 0)
      continue;
    std::string word = words[i];
    Rng rng(derive_seed(seed_, {"mock", engine, source_text,
                                std::to_string(i)}));
    if (rng.bernoulli(behavior.substitution_rate)) {
      const std::size_t tail = trailing_punct(word);
      const std::string core = word.substr(0, word.size() - tail);
      const std::string punct = word.substr(word.size() - tail);
      std::string replacement;
      if (!substitution_pool_.empty()) {
        std::size_t k = rng.index(substitution_pool_.size());
        replacement = substitution_pool_[k];
        if (replacement == core)
          replacement = substitution_pool_[(k + 1) % substitution_pool_.size()];
      }
      if (replacement.empty() || replacement == core) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "w%04x",
                      static_cast<unsigned>(rng.next() & 0xffffu));
        replacement = buf;
      }
      word = replacement + punct;
    }
    out.push_back(std::move(word));
  }
  if (out.empty()) return base;
  return text::join(out, " ");
}

CandidateSet translate_all(const SegmentId& id, const std::string& source,
                           const std::vector<TranslatorId>& engines,
                           const Translator& client) {
  check_engines(engines);
  if (text::is_blank(source)) throw InvalidArgument("empty source text");

  std::vector<TranslatorId> ordered = engines;
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.priority < b.priority; });

  std::vector<std::future<std::string>> pending;
  pending.reserve(ordered.size());
  for (const auto& e : ordered)
    pending.push_back(std::async(std::launch::async, [&client, &e, &source] {
      return client.translate(e.name, source);
    }));

  // Wait for every request before reporting, so no task outlives the call.
  std::vector<std::string> texts(ordered.size());
  std::exception_ptr first_error;
  std::string failed_engine;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    try {
      texts[i] = pending[i].get();
      if (text::is_blank(texts[i]))
        throw EngineFailure(ordered[i].name, "empty translation");
    } catch (...) {
      if (!first_error) {
        first_error = std::current_exception();
        failed_engine = ordered[i].name;
      }
    }
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const EngineFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw EngineFailure(failed_engine, e.what());
    }
  }

  CandidateSet set{id, source, {}};
  for (std::size_t i = 0; i < ordered.size(); ++i)
    set.translations.push_back({ordered[i], std::move(texts[i])});
  return set;
}

SegmentId row_id(std::string_view prefix, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return SegmentId(std::string(prefix) + "-" + buf);
}

Dataset ingest_professional_corpus(
    const std::vector<std::pair<std::string, std::string>>& pairs,
    std::string_view id_prefix) {
  if (pairs.empty()) throw InvalidArgument("professional corpus is empty");
  Dataset out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [src, tgt] = pairs[i];
    if (text::is_blank(src) || text::is_blank(tgt)) throw EmptyField(i + 1);
    ScoredSegment seg;
    seg.id = row_id(id_prefix, i + 1);
    seg.source = src;
    seg.target = tgt;
    seg.score = QualityScore(5);
    seg.origin = Origin::kProfessional;
    out.push_back(std::move(seg));
  }
  return out;
}

std::vector<UsageExample> read_usage_examples(const std::string& path) {
  std::vector<UsageExample> out;
  auto lines = text::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank(lines[i])) continue;
    auto cells = split_row(path, i + 1, lines[i], 3);
    out.push_back({cells[0], cells[1], cells[2]});
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_parallel_tsv(
    const std::string& path) {
  std::vector<std::pair<std::string, std::string>> out;
  auto lines = text::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::is_blank(lines[i])) continue;
    auto cells = split_row(path, i + 1, lines[i], 2);
    out.emplace_back(cells[0], cells[1]);
  }
  return out;
}

std::vector<std::string> read_sentences(const std::string& path) {
  std::vector<std::string> out;
  for (const auto& line : text::read_lines(path)) {
    auto t = text::trim(line);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::string encode_candidate_set(const CandidateSet& set) {
  validate(set);
  std::string line = text::escape_field(set.id.str());
  line += '\t';
  line += text::escape_field(set.source);
  for (const auto& t : set.translations) {
    line += '\t';
    line += text::escape_field(t.engine.name);
    line += '\t';
    line += std::to_string(t.engine.priority);
    line += '\t';
    line += text::escape_field(t.text);
  }
  return line;
}

CandidateSet decode_candidate_set(std::string_view line) {
  auto raw = text::split(line, '\t');
  if (raw.size() < 2 + 3 * 2 || (raw.size() - 2) % 3 != 0)
    throw MalformedRecord("candidate set needs id, source and >= 2 "
                          "(engine, priority, text) triples");
  auto field = [&](std::size_t i) {
    auto v = text::unescape_field(raw[i]);
    if (!v) throw MalformedRecord("bad escape in field " + std::to_string(i + 1));
    return *v;
  };
  CandidateSet set;
  set.id = SegmentId(field(0));
  set.source = field(1);
  for (std::size_t i = 2; i < raw.size(); i += 3) {
    auto priority = text::parse_int(raw[i + 1]);
    if (!priority) throw MalformedRecord("engine priority is not an integer");
    set.translations.push_back(
        {{field(i), static_cast<int>(*priority)}, field(i + 2)});
  }
  try {
    validate(set);
  } catch (const InvalidArgument& e) {
    throw MalformedRecord(e.what());
  }
  return set;
}

std::vector<CandidateSet> read_candidate_sets(const std::string& path) {
  std::vector<CandidateSet> out;
  auto lines = text::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      out.push_back(decode_candidate_set(lines[i]));
    } catch (const MalformedRecord& e) {
      throw ParseError(path, i + 1, e.what());
    }
  }
  return out;
}

void write_candidate_sets(const std::string& path,
                          const std::vector<CandidateSet>& sets) {
  std::string content;
  for (const auto& s : sets) {
    content += encode_candidate_set(s);
    content += '\n';
  }
  text::write_file_atomic(path, content);
}

std::vector<TranslatorId> parse_engine_list(std::string_view spec) {
  std::vector<TranslatorId> out;
  int next_priority = 0;
  for (auto item : text::split(spec, ',')) {
    item = text::trim(item);
    if (item.empty()) continue;
    auto colon = item.find(':');
    TranslatorId id;
    if (colon == std::string_view::npos) {
      id.name = std::string(item);
      id.priority = next_priority;
    } else {
      id.name = std::string(item.substr(0, colon));
      auto p = text::parse_int(item.substr(colon + 1));
      if (!p) throw InvalidArgument("bad engine priority in '" +
                                    std::string(item) + "'");
      id.priority = static_cast<int>(*p);
    }
    next_priority = id.priority + 1;
    out.push_back(std::move(id));
  }
  check_engines(out);
  return out;
}

}  // namespace qeforge::ingest
