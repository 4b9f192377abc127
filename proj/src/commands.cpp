#include "boldline/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "boldline/config.hpp"
#include "boldline/corpus.hpp"
#include "boldline/embedding.hpp"
#include "boldline/evaluation_io.hpp"
#include "boldline/lexicon.hpp"
#include "boldline/metrics.hpp"
#include "boldline/report.hpp"

namespace boldline::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  std::string config;
  std::string registry;
  std::vector<std::string> sentences;
  std::string corpus;
  std::string continuations;
  std::string evaluations;
  std::string out;
  std::string fixtures;
  std::string gateway_url;
  std::string gateway_mode;
  unsigned threads = 0;
};

RunConfig resolve_config(const Options& o) {
  std::string path = o.config;
  if (path.empty()) {
    if (const char* env = std::getenv("BOLDLINE_CONFIG")) path = env;
  }
  RunConfig c = path.empty() ? RunConfig::defaults() : RunConfig::load_file(path);

  if (!o.registry.empty()) c.paths.registry = o.registry;
  if (!o.sentences.empty()) c.paths.sentences.assign(o.sentences.begin(), o.sentences.end());
  if (!o.corpus.empty()) c.paths.corpus = o.corpus;
  if (!o.continuations.empty()) c.paths.continuations = o.continuations;
  if (!o.evaluations.empty()) c.paths.evaluations = o.evaluations;
  if (!o.out.empty()) c.paths.out = o.out;
  if (!o.fixtures.empty()) c.paths.fixtures = o.fixtures;
  if (!o.gateway_url.empty()) c.gateway.endpoint = o.gateway_url;
  if (!o.gateway_mode.empty()) {
    const auto mode = parse_gateway_mode(o.gateway_mode);
    if (!mode) throw ConfigError("--gateway-mode must be live, replay, record or off");
    c.gateway.mode = *mode;
  }
  if (o.threads > 0) c.threads = o.threads;
  c.gateway.fixture_dir = c.paths.fixtures;
  c.validate();
  return c;
}

void require_path(const fs::path& p, std::string_view what) {
  if (p.empty()) throw ConfigError(fmt::format("{} path is not configured", what));
  if (!fs::exists(p)) throw ConfigError(fmt::format("{} not found: {}", what, p.string()));
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return in;
}

std::vector<fs::path> sentence_files(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const auto& p : inputs) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

int build_corpus_cmd(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_path(c.paths.registry, "registry");
  if (c.paths.sentences.empty()) throw ConfigError("no sentence input configured (--sentences)");
  for (const auto& p : c.paths.sentences) require_path(p, "sentence input");
  if (c.paths.out.empty()) throw ConfigError("output directory is not configured (--out)");

  const auto registry = Registry::load_file(c.paths.registry.string());
  std::vector<SourceSentence> sentences;
  for (const auto& file : sentence_files(c.paths.sentences)) {
    auto in = open_input(file);
    try {
      auto batch = read_sentences(in);
      sentences.insert(sentences.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("{}: {}", file.string(), e.what()));
    }
  }
  if (sentences.empty()) err << "warning: no input sentences; writing an empty corpus\n";

  const auto corpus = build_corpus(sentences, registry);

  for (const auto& domain : registry.domains()) {
    std::ostringstream bold;
    const auto it = corpus.domains.find(domain.name);
    write_bold_json(bold, it == corpus.domains.end() ? std::map<std::string, std::vector<Prompt>>{} : it->second);
    write_file(c.paths.out / (domain.name + "_prompt.json"), bold.str());
  }
  std::ostringstream prompts, audit;
  write_prompts_jsonl(prompts, corpus);
  write_audit_jsonl(audit, corpus);
  write_file(c.paths.out / "prompts.jsonl", prompts.str());
  write_file(c.paths.out / "audit.jsonl", audit.str());

  out << fmt::format("{:<24} {:>8} {:>10}\n", "Domain", "# groups", "# prompts");
  for (const auto& domain : registry.domains())
    out << fmt::format("{:<24} {:>8} {:>10}\n", domain.name, domain.groups.size(), corpus.prompt_count(domain.name));
  out << fmt::format("{:<24} {:>8} {:>10}\n", "Total", registry.group_count(), corpus.prompt_count());
  out << fmt::format("{} sentences, {} prompts, {} rejected\n", sentences.size(), corpus.prompt_count(),
                     corpus.audit.size());
  return kExitOk;
}

struct Continuation {
  std::string text_id;
  std::string prompt;
  std::string continuation;
  std::string source;
  std::size_t line = 0;
};

std::vector<Continuation> read_continuations(std::istream& in) {
  std::vector<Continuation> out;
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
    if (!node.is_object() || !node.contains("text_id") || !node["text_id"].is_string() ||
        !node.contains("continuation") || !node["continuation"].is_string())
      throw ParseError("expected {\"text_id\", \"prompt\", \"continuation\"}", line_no);
    Continuation c;
    c.text_id = node["text_id"].get<std::string>();
    c.continuation = node["continuation"].get<std::string>();
    if (node.contains("prompt") && node["prompt"].is_string()) c.prompt = node["prompt"].get<std::string>();
    c.source = node.contains("source") && node["source"].is_string() ? node["source"].get<std::string>() : "default";
    c.line = line_no;
    out.push_back(std::move(c));
  }
  return out;
}

struct Resources {
  std::optional<EmbeddingTable<double>> embeddings;
  NormLexicon norms;
  Stoplist stoplist;
  std::optional<VaderScorer> sentiment;
};

Resources load_resources(const RunConfig& c) {
  require_path(c.paths.embeddings, "embeddings");
  require_path(c.paths.norm_lexicon, "norm lexicon");
  require_path(c.paths.stoplist, "stoplist");
  require_path(c.paths.sentiment_lexicon, "sentiment lexicon");
  Resources r;
  r.embeddings.emplace(load_embeddings_file<double>(c.paths.embeddings.string()));
  r.norms = NormLexicon::load_file(c.paths.norm_lexicon.string());
  r.stoplist = Stoplist::load_file(c.paths.stoplist.string());
  r.sentiment.emplace(VaderScorer::load_file(c.paths.sentiment_lexicon.string()));
  return r;
}

fs::path prompts_file(const fs::path& corpus) {
  return fs::is_directory(corpus) ? corpus / "prompts.jsonl" : corpus;
}

// Scores every continuation whose prompt id is known. Returns records in input order.
std::vector<TextEvaluation> run_evaluations(const RunConfig& c, ClassifierGateway* gateway, std::ostream& err) {
  require_path(c.paths.corpus, "corpus");
  require_path(prompts_file(c.paths.corpus), "corpus prompts");
  require_path(c.paths.continuations, "continuations");
  if (c.gateway.mode == GatewayMode::replay || c.gateway.mode == GatewayMode::record) {
    if (c.paths.fixtures.empty()) throw ConfigError("gateway mode requires a fixtures directory");
    if (c.gateway.mode == GatewayMode::replay) require_path(c.paths.fixtures, "fixtures directory");
  }

  const auto resources = load_resources(c);

  std::map<std::string, Prompt> prompts;
  {
    auto in = open_input(prompts_file(c.paths.corpus));
    for (auto& p : read_prompts(in)) prompts.emplace(p.id, std::move(p));
  }
  std::vector<Continuation> items;
  {
    auto in = open_input(c.paths.continuations);
    try {
      items = read_continuations(in);
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("{}: {}", c.paths.continuations.string(), e.what()));
    }
  }

  std::vector<const Prompt*> matched(items.size(), nullptr);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto it = prompts.find(items[i].text_id);
    if (it == prompts.end()) {
      err << fmt::format("warning: line {}: unknown prompt id \"{}\"; skipped\n", items[i].line, items[i].text_id);
      continue;
    }
    if (!items[i].prompt.empty() && items[i].prompt != it->second.text)
      err << fmt::format("warning: line {}: prompt text differs from corpus prompt \"{}\"\n", items[i].line,
                         it->first);
    matched[i] = &it->second;
  }

  EvaluationDeps deps;
  deps.embeddings = &*resources.embeddings;
  deps.norms = &resources.norms;
  deps.stoplist = &resources.stoplist;
  deps.sentiment = &*resources.sentiment;
  deps.gateway = gateway;
  deps.thresholds = c.thresholds;
  deps.regard_groups = c.regard_groups;
  deps.classifier_optional = c.classifier_optional;

  std::vector<std::optional<TextEvaluation>> results(items.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= items.size()) return;
      if (!matched[i]) continue;
      const auto& p = *matched[i];
      std::string text = p.anonymized_text;
      if (!items[i].continuation.empty()) text += " " + items[i].continuation;
      try {
        results[i] = evaluate_text(text, {items[i].text_id, p.domain, p.group, items[i].source}, deps);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!failure) failure = std::current_exception();
        next.store(items.size());
        return;
      }
    }
  };

  const unsigned width = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(std::max<std::size_t>(1, items.size()))));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < width; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TextEvaluation> out;
  for (auto& r : results) {
    if (!r) continue;
    if (r->classifier_error) err << fmt::format("warning: {}: classifier metrics absent: {}\n", r->text_id, *r->classifier_error);
    out.push_back(std::move(*r));
  }
  return out;
}

fs::path evaluations_path(const fs::path& out) {
  return out.extension() == ".jsonl" ? out : out / "evaluations.jsonl";
}

int evaluate_cmd(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.paths.out.empty()) throw ConfigError("output path is not configured (--out)");
  std::optional<ClassifierGateway> gateway;
  if (c.gateway.mode != GatewayMode::off) gateway.emplace(c.gateway);

  const auto evaluations = run_evaluations(c, gateway ? &*gateway : nullptr, err);
  std::string body;
  for (const auto& e : evaluations) body += to_json_line(e) + "\n";
  const auto path = evaluations_path(c.paths.out);
  write_file(path, body);
  out << fmt::format("{} evaluation records written to {}\n", evaluations.size(), path.string());
  return kExitOk;
}

int fixtures_record_cmd(RunConfig c, std::ostream& out, std::ostream& err) {
  if (c.paths.fixtures.empty()) throw ConfigError("fixtures directory is not configured (--fixtures)");
  if (c.gateway.endpoint.empty()) throw ConfigError("recording fixtures requires --gateway-url");
  c.gateway.mode = GatewayMode::record;
  c.gateway.fixture_dir = c.paths.fixtures;
  c.classifier_optional = false;
  ClassifierGateway gateway(c.gateway);
  const auto evaluations = run_evaluations(c, &gateway, err);
  out << fmt::format("recorded classifier responses for {} texts into {}\n", evaluations.size(),
                     c.paths.fixtures.string());
  return kExitOk;
}

int report_cmd(const RunConfig& c, std::ostream& out, std::ostream&) {
  if (c.paths.out.empty()) throw ConfigError("output directory is not configured (--out)");
  fs::path input = c.paths.evaluations;
  if (input.empty() && !c.paths.out.empty() && fs::exists(c.paths.out / "evaluations.jsonl"))
    input = c.paths.out / "evaluations.jsonl";
  require_path(input, "evaluations");

  std::vector<TextEvaluation> evaluations;
  {
    auto in = open_input(input);
    try {
      evaluations = read_evaluations(in);
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("{}: {}", input.string(), e.what()));
    }
  }
  const auto bundle = make_reports(evaluations, {c.paths.out});
  out << fmt::format("{} report tables from {} evaluations written to {}\n", bundle.tables.size(),
                     evaluations.size(), c.paths.out.string());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bias evaluation for open-ended text generation", "boldline"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", o.config, "JSON config file (falls back to $BOLDLINE_CONFIG)");
    cmd->add_option("--out", o.out, "Output directory");
  };
  auto evaluation_inputs = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", o.corpus, "Corpus directory written by build-corpus");
    cmd->add_option("--continuations", o.continuations, "JSON-Lines of {text_id, prompt, continuation, source}");
    cmd->add_option("--gateway-url", o.gateway_url, "Classifier service base URL");
    cmd->add_option("--fixtures", o.fixtures, "Classifier fixture directory");
    cmd->add_option("--threads", o.threads, "Evaluation width");
  };

  auto* build = app.add_subcommand("build-corpus", "Build grouped prompt corpora from source sentences");
  common(build);
  build->add_option("--registry", o.registry, "Domain/group registry JSON");
  build->add_option("--sentences", o.sentences, "Sentence JSON-Lines files or directories");

  auto* evaluate = app.add_subcommand("evaluate", "Score prompt + continuation texts");
  common(evaluate);
  evaluation_inputs(evaluate);
  evaluate->add_option("--gateway-mode", o.gateway_mode, "live | replay | record | off")
      ->check(CLI::IsMember({"live", "replay", "record", "off"}));

  auto* report = app.add_subcommand("report", "Aggregate evaluations into report tables");
  common(report);
  report->add_option("--evaluations", o.evaluations, "Evaluation JSON-Lines");

  auto* fixtures = app.add_subcommand("fixtures", "Classifier fixture management");
  fixtures->require_subcommand(1);
  auto* record = fixtures->add_subcommand("record", "Record classifier responses for a corpus");
  common(record);
  evaluation_inputs(record);

  std::vector<const char*> argv = {"boldline"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const auto config = resolve_config(o);
    if (build->parsed()) return build_corpus_cmd(config, out, err);
    if (evaluate->parsed()) return evaluate_cmd(config, out, err);
    if (report->parsed()) return report_cmd(config, out, err);
    if (record->parsed()) return fixtures_record_cmd(config, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitConfig;
}

}  // namespace boldline::cli
