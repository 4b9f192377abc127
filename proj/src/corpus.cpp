#include "boldline/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "boldline/error.hpp"

namespace boldline {
namespace {

using nlohmann::json;

// 1-based word position of the last word token inside the span.
std::size_t last_word_position(std::span<const Token> tokens, const Span& span) {
  for (std::size_t k = span.end + 1; k-- > span.start;)
    if (tokens[k].is_word) return word_position(tokens, k);
  return 0;
}

std::size_t first_word_position(std::span<const Token> tokens, const Span& span) {
  for (std::size_t k = span.start; k <= span.end; ++k)
    if (tokens[k].is_word) return word_position(tokens, k);
  return 0;
}

std::vector<std::string> string_array(const json& node, std::string_view what, std::size_t line = 0) {
  std::vector<std::string> out;
  if (node.is_null()) return out;
  if (!node.is_array()) throw ParseError(fmt::format("\"{}\" must be an array of strings", what), line);
  for (const auto& item : node) {
    if (!item.is_string()) throw ParseError(fmt::format("\"{}\" must be an array of strings", what), line);
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string required_string(const json& node, const char* key, std::size_t line) {
  if (!node.contains(key) || !node[key].is_string())
    throw ParseError(fmt::format("missing string field \"{}\"", key), line);
  return node[key].get<std::string>();
}

}  // namespace

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::too_short: return "too_short";
    case RejectReason::no_person_name: return "no_person_name";
    case RejectReason::term_not_early: return "term_not_early";
    case RejectReason::term_truncated: return "term_truncated";
    case RejectReason::unknown_group: return "unknown_group";
    case RejectReason::duplicate: return "duplicate";
  }
  return "?";
}

bool is_person_domain(std::string_view domain) { return domain == "gender" || domain == "race"; }

std::vector<Span> select_mentions(std::span<const Token> tokens, std::span<const std::string> terms) {
  std::vector<Span> all;
  for (const auto& term : terms)
    for (auto& s : find_mentions(tokens, term)) all.push_back(std::move(s));
  std::sort(all.begin(), all.end(), [](const Span& a, const Span& b) {
    return std::tie(a.start, b.end) < std::tie(b.start, a.end);
  });
  std::vector<Span> chosen;
  for (auto& s : all) {
    if (!chosen.empty() && s.start <= chosen.back().end) continue;
    chosen.push_back(std::move(s));
  }
  return chosen;
}

std::variant<Prompt, RejectReason> extract_prompt(const SourceSentence& sentence) {
  const auto tokens = tokenize(sentence.text);
  if (word_count(tokens) < kMinSentenceWords) return RejectReason::too_short;

  std::size_t best_start = 0;
  std::size_t best_end = 0;
  for (const auto& term : sentence.group_terms) {
    for (const auto& span : find_mentions(tokens, term)) {
      const auto start = first_word_position(tokens, span);
      const auto end = last_word_position(tokens, span);
      if (start == 0 || start > kTermWindowWords) continue;
      if (best_start == 0 || start < best_start || (start == best_start && end > best_end)) {
        best_start = start;
        best_end = end;
      }
    }
  }
  if (best_start == 0) return RejectReason::term_not_early;
  if (best_end > kMaxPromptWords) return RejectReason::term_truncated;

  const std::size_t words = best_end <= kLeadWords ? kLeadWords + 1 : best_end;

  std::size_t seen = 0;
  std::size_t begin = std::string::npos;
  std::size_t end = 0;
  for (const auto& t : tokens) {
    if (begin == std::string::npos) begin = t.offset;
    if (!t.is_word) continue;
    if (++seen == words) {
      end = t.offset + t.surface.size();
      break;
    }
  }

  Prompt p;
  p.text = sentence.text.substr(begin, end - begin);
  p.word_count = words;
  p.domain = sentence.domain;
  p.group = sentence.group;
  p.source_title = sentence.source_title;

  const auto prompt_tokens = tokenize(p.text);
  const auto spans = select_mentions(prompt_tokens, sentence.group_terms);
  p.anonymized_text = is_person_domain(p.domain) ? anonymize(p.text, spans, {}, p.domain)
                                                 : anonymize(p.text, {}, spans, p.domain);
  return p;
}

std::vector<Span> GazetteerNameDetector::find_names(std::span<const Token> tokens) const {
  return select_mentions(tokens, names_);
}

bool require_person_name(const SourceSentence& sentence, const NameDetector& detector) {
  if (!is_person_domain(sentence.domain)) return true;
  return !detector.find_names(tokenize(sentence.text)).empty();
}

std::string anonymize(std::string_view text, std::span<const Span> name_spans,
                      std::span<const Span> term_spans, std::string_view domain) {
  struct Replacement {
    std::size_t start;
    std::size_t end;
    std::string_view with;
  };
  std::vector<Replacement> reps;
  const bool person = is_person_domain(domain);
  if (person)
    for (const auto& s : name_spans) reps.push_back({s.start, s.end, "Person"});
  else
    for (const auto& s : term_spans) reps.push_back({s.start, s.end, "XYZ"});
  if (reps.empty()) return std::string(text);

  std::sort(reps.begin(), reps.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
  const auto tokens = tokenize(text);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (reps[i].start > reps[i].end || reps[i].end >= tokens.size())
      throw OverlapError(fmt::format("span [{}, {}] outside the token range", reps[i].start, reps[i].end));
    if (i > 0 && reps[i].start <= reps[i - 1].end)
      throw OverlapError(fmt::format("spans [{}, {}] and [{}, {}] overlap", reps[i - 1].start,
                                     reps[i - 1].end, reps[i].start, reps[i].end));
  }

  std::string out;
  std::size_t cursor = 0;
  for (const auto& r : reps) {
    const auto begin = tokens[r.start].offset;
    const auto end = tokens[r.end].offset + tokens[r.end].surface.size();
    out.append(text.substr(cursor, begin - cursor));
    out.append(r.with);
    cursor = end;
  }
  out.append(text.substr(cursor));
  return out;
}

Registry Registry::load(std::istream& in) {
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("registry: ") + e.what());
  }
  if (!root.is_object() || !root.contains("domains") || !root["domains"].is_array())
    throw ParseError("registry: expected {\"domains\": [...]}");

  std::vector<DomainSpec> domains;
  std::set<std::string> seen_domains;
  for (const auto& d : root["domains"]) {
    DomainSpec domain;
    domain.name = required_string(d, "name", 0);
    if (!seen_domains.insert(domain.name).second)
      throw ParseError("registry: duplicate domain \"" + domain.name + "\"");
    if (!d.contains("groups") || !d["groups"].is_array())
      throw ParseError("registry: domain \"" + domain.name + "\" has no groups array");
    std::set<std::string> seen_groups;
    for (const auto& g : d["groups"]) {
      GroupSpec group;
      group.name = required_string(g, "name", 0);
      if (!seen_groups.insert(group.name).second)
        throw ParseError("registry: duplicate group \"" + group.name + "\" in " + domain.name);
      group.terms = string_array(g.value("terms", json()), "terms");
      group.names = string_array(g.value("names", json()), "names");
      domain.groups.push_back(std::move(group));
    }
    domains.push_back(std::move(domain));
  }
  return Registry(std::move(domains));
}

Registry Registry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open registry: " + path);
  return load(in);
}

const GroupSpec* Registry::find(std::string_view domain, std::string_view group) const {
  for (const auto& d : domains_) {
    if (d.name != domain) continue;
    for (const auto& g : d.groups)
      if (g.name == group) return &g;
  }
  return nullptr;
}

std::size_t Registry::group_count() const {
  std::size_t n = 0;
  for (const auto& d : domains_) n += d.groups.size();
  return n;
}

std::size_t GroupedCorpus::prompt_count() const {
  std::size_t n = 0;
  for (const auto& [domain, groups] : domains) n += prompt_count(domain);
  return n;
}

std::size_t GroupedCorpus::prompt_count(const std::string& domain) const {
  const auto it = domains.find(domain);
  if (it == domains.end()) return 0;
  std::size_t n = 0;
  for (const auto& [group, prompts] : it->second) n += prompts.size();
  return n;
}

GroupedCorpus build_corpus(std::span<const SourceSentence> sentences, const Registry& registry) {
  GroupedCorpus corpus;
  struct Candidate {
    Prompt prompt;
    std::size_t index;
  };
  std::vector<Candidate> candidates;

  auto reject = [&](RejectReason reason, std::size_t index) {
    const auto& s = sentences[index];
    corpus.audit.push_back({reason, index, s.domain, s.group, s.source_title, s.text});
  };

  for (std::size_t i = 0; i < sentences.size(); ++i) {
    SourceSentence sentence = sentences[i];
    const GroupSpec* group = registry.find(sentence.domain, sentence.group);
    if (!group) {
      reject(RejectReason::unknown_group, i);
      continue;
    }
    for (const auto& term : group->terms)
      if (std::find(sentence.group_terms.begin(), sentence.group_terms.end(), term) == sentence.group_terms.end())
        sentence.group_terms.push_back(term);

    if (word_count(tokenize(sentence.text)) < kMinSentenceWords) {
      reject(RejectReason::too_short, i);
      continue;
    }

    std::vector<std::string> gazetteer = sentence.group_terms;
    gazetteer.insert(gazetteer.end(), group->names.begin(), group->names.end());
    if (!require_person_name(sentence, GazetteerNameDetector(std::move(gazetteer)))) {
      reject(RejectReason::no_person_name, i);
      continue;
    }

    auto result = extract_prompt(sentence);
    if (auto* reason = std::get_if<RejectReason>(&result)) {
      reject(*reason, i);
      continue;
    }
    candidates.push_back({std::get<Prompt>(std::move(result)), i});
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.prompt.domain, a.prompt.group, a.prompt.source_title, a.prompt.text, a.index) <
           std::tie(b.prompt.domain, b.prompt.group, b.prompt.source_title, b.prompt.text, b.index);
  });

  std::set<std::pair<std::string, std::string>> seen;
  for (auto& c : candidates) {
    if (!seen.emplace(c.prompt.domain, c.prompt.text).second) {
      reject(RejectReason::duplicate, c.index);
      continue;
    }
    auto& list = corpus.domains[c.prompt.domain][c.prompt.group];
    c.prompt.id = fmt::format("{}/{}/{}", c.prompt.domain, c.prompt.group, list.size());
    list.push_back(std::move(c.prompt));
  }

  std::stable_sort(corpus.audit.begin(), corpus.audit.end(),
                   [](const Rejection& a, const Rejection& b) { return a.sentence_index < b.sentence_index; });
  return corpus;
}

std::vector<SourceSentence> read_sentences(std::istream& in) {
  std::vector<SourceSentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json node;
    try {
      node = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!node.is_object()) throw ParseError("expected a JSON object", line_no);
    SourceSentence s;
    s.text = required_string(node, "text", line_no);
    s.source_title = required_string(node, "source_title", line_no);
    s.domain = required_string(node, "domain", line_no);
    s.group = required_string(node, "group", line_no);
    s.group_terms = string_array(node.value("group_terms", json()), "group_terms", line_no);
    out.push_back(std::move(s));
  }
  return out;
}

void write_bold_json(std::ostream& out, const std::map<std::string, std::vector<Prompt>>& groups) {
  json root = json::object();
  for (const auto& [group, prompts] : groups) {
    json sources = json::object();
    for (const auto& p : prompts) sources[p.source_title].push_back(p.text);
    root[group] = sources;
  }
  out << root.dump(2) << '\n';
}

void write_prompts_jsonl(std::ostream& out, const GroupedCorpus& corpus) {
  for (const auto& [domain, groups] : corpus.domains)
    for (const auto& [group, prompts] : groups)
      for (const auto& p : prompts) {
        json node = {{"id", p.id},
                     {"domain", p.domain},
                     {"group", p.group},
                     {"source_title", p.source_title},
                     {"text", p.text},
                     {"anonymized_text", p.anonymized_text},
                     {"word_count", p.word_count}};
        out << node.dump() << '\n';
      }
}

void write_audit_jsonl(std::ostream& out, const GroupedCorpus& corpus) {
  for (const auto& r : corpus.audit) {
    json node = {{"sentence_index", r.sentence_index},
                 {"reason", to_string(r.reason)},
                 {"domain", r.domain},
                 {"group", r.group},
                 {"source_title", r.source_title},
                 {"text", r.text}};
    out << node.dump() << '\n';
  }
}

std::vector<Prompt> read_prompts(std::istream& in) {
  std::vector<Prompt> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json node;
    try {
      node = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
    Prompt p;
    p.id = required_string(node, "id", line_no);
    p.domain = required_string(node, "domain", line_no);
    p.group = required_string(node, "group", line_no);
    p.source_title = required_string(node, "source_title", line_no);
    p.text = required_string(node, "text", line_no);
    p.anonymized_text = required_string(node, "anonymized_text", line_no);
    p.word_count = node.value("word_count", std::size_t{0});
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace boldline
