#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "boldline/text.hpp"

namespace boldline {

struct SourceSentence {
  std::string text;
  std::string source_title;
  std::string domain;
  std::string group;
  std::vector<std::string> group_terms;
};

struct Prompt {
  std::string id;
  std::string text;
  std::size_t word_count = 0;
  std::string domain;
  std::string group;
  std::string source_title;
  std::string anonymized_text;
};

enum class RejectReason { too_short, no_person_name, term_not_early, term_truncated, unknown_group, duplicate };
std::string_view to_string(RejectReason reason);

struct Rejection {
  RejectReason reason = RejectReason::too_short;
  std::size_t sentence_index = 0;
  std::string domain;
  std::string group;
  std::string source_title;
  std::string text;
};

inline constexpr std::size_t kMinSentenceWords = 9;  // sentences of <= 8 words are dropped
inline constexpr std::size_t kTermWindowWords = 8;   // mention must start within these words
inline constexpr std::size_t kLeadWords = 5;
inline constexpr std::size_t kMaxPromptWords = 9;

// Domains whose group terms are person names ("Person") rather than group names ("XYZ").
bool is_person_domain(std::string_view domain);

/// Truncates a sentence to a 6-9 word prompt ending at or after the earliest
/// group-term mention starting within the first eight words.
std::variant<Prompt, RejectReason> extract_prompt(const SourceSentence& sentence);

class NameDetector {
 public:
  virtual ~NameDetector() = default;
  virtual std::vector<Span> find_names(std::span<const Token> tokens) const = 0;
};

/// Finds listed person names by exact (case-insensitive) token match.
class GazetteerNameDetector final : public NameDetector {
 public:
  explicit GazetteerNameDetector(std::vector<std::string> names) : names_(std::move(names)) {}
  std::vector<Span> find_names(std::span<const Token> tokens) const override;

 private:
  std::vector<std::string> names_;
};

/// True when a person name is present; always true outside person-name domains.
bool require_person_name(const SourceSentence& sentence, const NameDetector& detector);

/// Replaces name spans with "Person" in person-name domains and term spans
/// with "XYZ" elsewhere; everything else is copied byte for byte. Spans index
/// tokenize(text).
std::string anonymize(std::string_view text, std::span<const Span> name_spans,
                      std::span<const Span> term_spans, std::string_view domain);

// Earliest-first, longest-first selection of non-overlapping mentions of any term.
std::vector<Span> select_mentions(std::span<const Token> tokens, std::span<const std::string> terms);

struct GroupSpec {
  std::string name;
  std::vector<std::string> terms;
  std::vector<std::string> names;
};

struct DomainSpec {
  std::string name;
  std::vector<GroupSpec> groups;
};

class Registry {
 public:
  Registry() = default;
  explicit Registry(std::vector<DomainSpec> domains) : domains_(std::move(domains)) {}

  /// {"domains": [{"name": ..., "groups": [{"name": ..., "terms": [...], "names": [...]}]}]}
  static Registry load(std::istream& in);
  static Registry load_file(const std::string& path);

  const std::vector<DomainSpec>& domains() const { return domains_; }
  const GroupSpec* find(std::string_view domain, std::string_view group) const;
  std::size_t group_count() const;

 private:
  std::vector<DomainSpec> domains_;
};

struct GroupedCorpus {
  // domain -> group -> prompts ordered by (source_title, text)
  std::map<std::string, std::map<std::string, std::vector<Prompt>>> domains;
  std::vector<Rejection> audit;  // ordered by sentence index

  std::size_t prompt_count() const;
  std::size_t prompt_count(const std::string& domain) const;
};

GroupedCorpus build_corpus(std::span<const SourceSentence> sentences, const Registry& registry);

std::vector<SourceSentence> read_sentences(std::istream& in);

// group -> {source_title -> [prompt text]}
void write_bold_json(std::ostream& out, const std::map<std::string, std::vector<Prompt>>& groups);
void write_prompts_jsonl(std::ostream& out, const GroupedCorpus& corpus);
void write_audit_jsonl(std::ostream& out, const GroupedCorpus& corpus);
std::vector<Prompt> read_prompts(std::istream& in);

}  // namespace boldline
