// semtag: command-line front end for the semantic tagging toolkit.
//
// All heavy lifting lives in the library headers; this file is argument
// plumbing, stream selection ("-" is stdin/stdout for corpus paths), atomic
// output writing, and the error-kind → exit-code mapping.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "semtag/baseline.hpp"
#include "semtag/bootstrap.hpp"
#include "semtag/corpus.hpp"
#include "semtag/drs.hpp"
#include "semtag/error.hpp"
#include "semtag/eval.hpp"
#include "semtag/model_io.hpp"
#include "semtag/schema.hpp"
#include "semtag/tagset.hpp"
#include "semtag/trigram_model.hpp"

namespace {

using namespace semtag;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
      return 64;  // bad flag values are usage errors
    case ErrorKind::FormatError:
    case ErrorKind::EmptySentence:
      return 65;
    case ErrorKind::UnknownTag:
      return 66;
    case ErrorKind::AlignmentError:
    case ErrorKind::IncomparableReports:
      return 67;
    case ErrorKind::EmptyCorpus:
    case ErrorKind::EmptySeed:
    case ErrorKind::DegenerateCounts:
      return 68;
    case ErrorKind::UnregisteredPair:
    case ErrorKind::ArityMismatch:
    case ErrorKind::NonTerminating:
      return 69;
    case ErrorKind::IoError:
      return 74;
  }
  return 70;
}

Corpus read_tagged_path(const std::string& path) {
  if (path == "-") return read_tagged(std::cin, Tagset::builtin(), "<stdin>");
  return read_tagged_file(path);
}

Corpus read_plain_path(const std::string& path) {
  if (path == "-") return read_plain(std::cin, "<stdin>");
  return read_plain_file(path);
}

/// Writes `text` to `path` ("-" = stdout) via a sibling temp file and rename,
/// so interrupted or failed runs never leave partial output behind.
void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  const std::string temp = path + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot open '" + temp + "' for writing");
    out << text;
    out.flush();
    if (!out) fail(ErrorKind::IoError, "failed while writing '" + temp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    fail(ErrorKind::IoError, "cannot move output into place at '" + path + "'");
  }
}

// ---------------------------------------------------------------------------
// validate

/// Lenient scan of the tagged format: mirrors the strict reader's grammar but
/// keeps going after a violation so several problems surface in one run.
int run_validate(const std::string& path) {
  constexpr std::size_t kMaxDiagnostics = 20;
  std::ifstream file;
  if (path != "-") {
    file.open(path);
    if (!file) fail(ErrorKind::IoError, "cannot open corpus file: " + path);
  }
  std::istream& in = path == "-" ? std::cin : file;
  const std::string origin = path == "-" ? "<stdin>" : path;
  const Tagset& tagset = Tagset::builtin();

  std::vector<std::string> diagnostics;
  std::size_t error_total = 0, sentences = 0, tokens = 0;
  bool in_sentence = false;
  auto note = [&](const std::string& message) {
    ++error_total;
    if (diagnostics.size() < kMaxDiagnostics) diagnostics.push_back(message);
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in_sentence) ++sentences;
      in_sentence = false;
      continue;
    }
    if (line[0] == '#' && !in_sentence) continue;
    const std::string where = detail::line_ref(origin, line_no);
    const auto fields = detail::split(line, '\t');
    if (fields.size() != 2) {
      note(where + "expected 2 tab-separated columns, got " + std::to_string(fields.size()));
      in_sentence = true;
      continue;
    }
    try {
      Token::from_surface(fields[0], where);
    } catch (const SemtagError& e) {
      note(e.what());
    }
    if (!tagset.find(fields[1])) note(where + "unknown sem-tag '" + fields[1] + "'");
    in_sentence = true;
    ++tokens;
  }
  if (in_sentence) ++sentences;

  if (error_total == 0) {
    std::cout << "ok\t" << sentences << " sentence(s)\t" << tokens << " token(s)\n";
    return 0;
  }
  for (const std::string& message : diagnostics) std::cout << message << "\n";
  if (error_total > diagnostics.size()) {
    std::cout << "... and " << (error_total - diagnostics.size()) << " more error(s)\n";
  }
  return 1;
}

// ---------------------------------------------------------------------------
// subcommand options

struct Options {
  std::string corpus;
  std::string model_path;
  std::string output = "-";
  std::string gold;
  std::string predicted;
  std::string baseline_predicted;
  std::string seed, unlabeled, heldout;
  std::string schema_file;
  std::string tag_code, category, symbol;
  std::vector<std::string> roles;
  std::string format = "text";

  TrigramConfig tagger;
  BootstrapConfig boot;
  bool beam_set = false;
};

void add_tagger_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--beam", opt.tagger.beam_width, "beam width (0 = exact search)")
      ->default_val(20);
  cmd->add_option("--suffix-len", opt.tagger.max_suffix_len,
                  "longest suffix used by the unknown-word model")
      ->default_val(10);
  cmd->add_option("--rare-threshold", opt.tagger.rare_threshold,
                  "training frequency at or below which words feed the suffix model")
      ->default_val(10);
}

void add_format_flag(CLI::App* cmd, Options& opt) {
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"text", "tsv"}))
      ->default_val("text");
}

int run_train(const Options& opt) {
  const Corpus corpus = read_tagged_path(opt.corpus);
  const TrigramModel model = train_trigram(corpus, opt.tagger);
  save_model_file(model, opt.model_path);
  std::cout << "trained\t" << corpus.sentences.size() << " sentence(s)\t" << corpus.token_count()
            << " token(s)\t" << opt.model_path << "\n";
  return 0;
}

int run_tag(const Options& opt) {
  TrigramModel model = load_model_file(opt.model_path);
  if (opt.beam_set) model.beam_width = opt.tagger.beam_width;
  const Corpus plain = read_plain_path(opt.corpus);
  Corpus tagged;
  tagged.sentences.reserve(plain.sentences.size());
  for (const Sentence& sentence : plain.sentences) {
    tagged.sentences.push_back(
        Sentence::tagged_with(sentence.tokens, viterbi_decode(model, sentence)));
  }
  write_output(opt.output, write_tagged_string(tagged));
  return 0;
}

int run_eval(const Options& opt) {
  const Corpus gold = read_tagged_path(opt.gold);
  const EvalReport report = evaluate(gold, read_tagged_path(opt.predicted));
  const bool tsv = opt.format == "tsv";
  std::string out;
  if (opt.baseline_predicted.empty()) {
    out = tsv ? render_tsv(report) : render_text(report);
  } else {
    const EvalReport other = evaluate(gold, read_tagged_path(opt.baseline_predicted));
    const ComparisonSummary summary = compare(report, other);
    if (tsv) {
      out = "[a]\n" + render_tsv(report) + "[b]\n" + render_tsv(other) + "[comparison]\n" +
            render_comparison_tsv(summary);
    } else {
      out = "[a]\n" + render_text(report) + "\n[b]\n" + render_text(other) + "\n[comparison]\n" +
            render_comparison_text(summary);
    }
  }
  std::cout << out;
  return 0;
}

int run_baseline(const Options& opt) {
  const Corpus train = read_tagged_path(opt.corpus);
  const Corpus gold = read_tagged_path(opt.gold);
  const BaselineModel model = train_baseline(train);
  const EvalReport report = evaluate(gold, tag_baseline_corpus(model, gold));
  std::cout << (opt.format == "tsv" ? render_tsv(report) : render_text(report));
  return 0;
}

int run_bootstrap(const Options& opt) {
  validate(opt.boot);  // reject bad flag combinations before touching any file
  const Corpus seed = read_tagged_path(opt.seed);
  const Corpus unlabeled = read_plain_path(opt.unlabeled);
  const Corpus heldout = read_tagged_path(opt.heldout);
  const BootstrapResult result = bootstrap(seed, unlabeled, heldout, opt.boot, opt.tagger);
  if (!opt.model_path.empty()) save_model_file(result.model, opt.model_path);
  std::cout << render_bootstrap_text(result.report);
  return 0;
}

int run_schema(const Options& opt) {
  const SchemaRegistry* registry = &SchemaRegistry::builtin();
  SchemaRegistry loaded;
  if (!opt.schema_file.empty()) {
    loaded = SchemaRegistry::load_file(opt.schema_file);
    registry = &loaded;
  }
  const SemSchema& schema = registry->schema_for(opt.tag_code, opt.category);
  const TermPtr term = beta_reduce(instantiate(schema, opt.symbol, opt.roles));
  std::cout << print_term(term) << "\n";
  return 0;
}

int run_tagset(const Options& opt) {
  const Tagset& tagset = Tagset::builtin();
  std::string out;
  if (opt.format == "tsv") {
    for (const SemTag& tag : tagset.tags()) {
      out += tag.code + "\t" + tagset.meta(tag.meta).code + "\t" + tag.gloss + "\t";
      for (std::size_t i = 0; i < tag.examples.size(); ++i) {
        if (i) out += "|";
        out += tag.examples[i];
      }
      out += "\n";
    }
  } else {
    out += "universal semantic tagset v" + tagset.version() + ": " +
           std::to_string(tagset.size()) + " sem-tags, " + std::to_string(tagset.metas().size()) +
           " meta-tags (* = new in v" + tagset.version() + ")\n";
    for (const MetaTag& meta : tagset.metas()) {
      out += "\n" + meta.code + "\t" + meta.gloss + "\n";
      for (TagId member : meta.members) {
        const SemTag& tag = tagset.tag(member);
        out += "  " + tag.code + (tag.new_in_v07 ? "*" : " ") + "\t" + tag.gloss + "\t";
        for (std::size_t i = 0; i < tag.examples.size(); ++i) {
          if (i) out += "|";
          out += tag.examples[i];
        }
        out += "\n";
      }
    }
  }
  std::cout << out;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"universal semantic tagging toolkit"};
  app.require_subcommand(1);
  Options opt;
  int status = 0;

  CLI::App* validate = app.add_subcommand("validate", "check a tagged corpus against the tagset");
  validate->add_option("corpus", opt.corpus, "tagged corpus path (- = stdin)")->required();
  validate->callback([&] { status = run_validate(opt.corpus); });

  CLI::App* train = app.add_subcommand("train", "train a trigram model on a tagged corpus");
  train->add_option("corpus", opt.corpus, "tagged training corpus (- = stdin)")->required();
  train->add_option("--model", opt.model_path, "output model path")->required();
  add_tagger_flags(train, opt);
  train->callback([&] { status = run_train(opt); });

  CLI::App* tag = app.add_subcommand("tag", "tag a plain corpus with a trained model");
  tag->add_option("corpus", opt.corpus, "plain corpus path (- = stdin)")->required();
  tag->add_option("output", opt.output, "tagged output path (- = stdout)");
  tag->add_option("--model", opt.model_path, "trained model path")->required();
  tag->add_option("--beam", opt.tagger.beam_width, "beam width override (0 = exact search)")
      ->trigger_on_parse()
      ->each([&opt](const std::string&) { opt.beam_set = true; });
  tag->callback([&] { status = run_tag(opt); });

  CLI::App* eval_cmd = app.add_subcommand("eval", "score predictions against a gold corpus");
  eval_cmd->add_option("gold", opt.gold, "gold tagged corpus (- = stdin)")->required();
  eval_cmd->add_option("predicted", opt.predicted, "predicted tagged corpus")->required();
  eval_cmd->add_option("baseline", opt.baseline_predicted,
                       "second predicted corpus; adds a comparison table");
  add_format_flag(eval_cmd, opt);
  eval_cmd->callback([&] { status = run_eval(opt); });

  CLI::App* baseline =
      app.add_subcommand("baseline", "score the most-frequent-tag baseline on a gold corpus");
  baseline->add_option("train", opt.corpus, "tagged training corpus (- = stdin)")->required();
  baseline->add_option("gold", opt.gold, "gold tagged corpus")->required();
  add_format_flag(baseline, opt);
  baseline->callback([&] { status = run_baseline(opt); });

  CLI::App* boot = app.add_subcommand("bootstrap", "self-train from a seed corpus and raw text");
  boot->add_option("seed", opt.seed, "tagged seed corpus")->required();
  boot->add_option("unlabeled", opt.unlabeled, "plain unlabeled pool")->required();
  boot->add_option("heldout", opt.heldout, "tagged held-out corpus")->required();
  boot->add_option("--model", opt.model_path, "write the best model here");
  boot->add_option("--threshold", opt.boot.confidence_threshold,
                   "sentence confidence needed for promotion")
      ->default_val(0.9);
  boot->add_option("--max-iter", opt.boot.max_iterations, "iteration cap")->default_val(5);
  boot->add_option("--promote-cap", opt.boot.promote_cap, "promotions per iteration")
      ->default_val(100);
  boot->add_option("--stop-delta", opt.boot.stop_delta,
                   "stop when held-out accuracy gain falls below this")
      ->default_val(0.0);
  add_tagger_flags(boot, opt);
  boot->callback([&] { status = run_bootstrap(opt); });

  CLI::App* schema = app.add_subcommand("schema", "compile a sem-tag × category pair to a term");
  schema->add_option("tag", opt.tag_code, "sem-tag code")->required();
  schema->add_option("category", opt.category, "CCG category, e.g. S\\NP")->required();
  schema->add_option("symbol", opt.symbol, "lexical symbol substituted for SYM")->required();
  schema->add_option("roles", opt.roles, "role names for the template's role slots");
  schema->add_option("--schemas", opt.schema_file, "schema registry file (default: built-in)");
  schema->callback([&] { status = run_schema(opt); });

  CLI::App* tagset_cmd = app.add_subcommand("tagset", "dump the sem-tag table");
  add_format_flag(tagset_cmd, opt);
  tagset_cmd->callback([&] { status = run_tagset(opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  } catch (const SemtagError& e) {
    std::cerr << "semtag: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "semtag: " << e.what() << "\n";
    return 70;
  }
  return status;
}
