#pragma once

// Flat-file persistence for trained trigram models.
//
// The file is UTF-8, line-oriented, tab-separated, and sectioned:
//   [meta]          format/tagset versions, configuration, corpus totals, theta
//   [lambdas]       the three interpolation weights
//   [unigram]       <tag> <count>            (only nonzero rows)
//   [bigram]        <tag> <tag> <count>
//   [trigram]       <tag> <tag> <tag> <count>
//   [lexicon]       <surface> <tag> <count>
//   [suffix-lower]  <suffix> <tag> <prob>    (empty suffix = empty first field)
//   [suffix-upper]  <suffix> <tag> <prob>
// Boundary pseudo-tags appear as the literal codes "<s>" and "</s>".
// Counts are integers; every probability is printed with 17 significant
// digits so a load/save cycle is byte-identical and value-exact. All rows
// come from sorted containers, so identical models serialize identically.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "semtag/eval.hpp"
#include "semtag/trigram_model.hpp"

namespace semtag {

namespace detail {

constexpr const char* kBosCode = "<s>";
constexpr const char* kEosCode = "</s>";
constexpr std::uint64_t kModelFormatVersion = 1;

inline std::string ext_code(const TrigramModel& model, ExtTagId tag) {
  if (tag == model.bos()) return kBosCode;
  if (tag == model.eos()) return kEosCode;
  return model.tagset->tag(static_cast<TagId>(tag)).code;
}

inline void write_suffix_section(std::ostream& out, const char* header,
                                 const std::map<std::string, std::map<TagId, double>>& table,
                                 const Tagset& tagset) {
  out << header << "\n";
  for (const auto& [suffix, dist] : table) {
    for (const auto& [tag, prob] : dist) {
      out << suffix << "\t" << tagset.tag(tag).code << "\t" << fmt_double(prob) << "\n";
    }
  }
}

}  // namespace detail

inline void save_model(const TrigramModel& model, std::ostream& out) {
  const Tagset& tagset = *model.tagset;
  out << "[meta]\n";
  out << "format-version\t" << detail::kModelFormatVersion << "\n";
  out << "tagset-version\t" << tagset.version() << "\n";
  out << "beam-width\t" << model.beam_width << "\n";
  out << "max-suffix-len\t" << model.suffix.max_suffix_len << "\n";
  out << "rare-threshold\t" << model.suffix.rare_threshold << "\n";
  out << "token-total\t" << model.counts.token_total << "\n";
  out << "sentence-total\t" << model.counts.sentence_total << "\n";
  out << "theta\t" << detail::fmt_double(model.suffix.theta) << "\n";

  out << "[lambdas]\n";
  out << "l1\t" << detail::fmt_double(model.lambdas.l1) << "\n";
  out << "l2\t" << detail::fmt_double(model.lambdas.l2) << "\n";
  out << "l3\t" << detail::fmt_double(model.lambdas.l3) << "\n";

  out << "[unigram]\n";
  for (std::size_t t = 0; t < model.counts.unigram.size(); ++t) {
    if (model.counts.unigram[t] == 0) continue;
    out << detail::ext_code(model, static_cast<ExtTagId>(t)) << "\t"
        << model.counts.unigram[t] << "\n";
  }

  out << "[bigram]\n";
  for (const auto& [key, count] : model.counts.bigram) {
    out << detail::ext_code(model, key[0]) << "\t" << detail::ext_code(model, key[1]) << "\t"
        << count << "\n";
  }

  out << "[trigram]\n";
  for (const auto& [key, count] : model.counts.trigram) {
    out << detail::ext_code(model, key[0]) << "\t" << detail::ext_code(model, key[1]) << "\t"
        << detail::ext_code(model, key[2]) << "\t" << count << "\n";
  }

  out << "[lexicon]\n";
  for (const auto& [surface, tag_counts] : model.counts.word_tag) {
    for (const auto& [tag, count] : tag_counts) {
      out << surface << "\t" << tagset.tag(tag).code << "\t" << count << "\n";
    }
  }

  detail::write_suffix_section(out, "[suffix-lower]", model.suffix.lower, tagset);
  detail::write_suffix_section(out, "[suffix-upper]", model.suffix.upper, tagset);
}

inline std::string model_to_string(const TrigramModel& model) {
  std::ostringstream out;
  save_model(model, out);
  return out.str();
}

/// Writes to a sibling temp file and renames it into place, so a failed save
/// never leaves a partial model behind.
inline void save_model_file(const TrigramModel& model, const std::string& path) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary);
    if (!out) fail(ErrorKind::IoError, "cannot open '" + temp + "' for writing");
    save_model(model, out);
    out.flush();
    if (!out) fail(ErrorKind::IoError, "failed while writing '" + temp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    fail(ErrorKind::IoError, "cannot move model into place at '" + path + "'");
  }
}

namespace detail {

struct ModelParser {
  std::istream& in;
  const Tagset& tagset;
  std::string origin;

  TrigramModel model;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_meta;
  std::size_t line_no = 0;

  ModelParser(std::istream& stream, const Tagset& ts, std::string where)
      : in(stream), tagset(ts), origin(std::move(where)) {
    model.tagset = &tagset;
    model.counts.n_tags = tagset.size();
    model.counts.unigram.assign(tagset.size() + 2, 0);
  }

  [[noreturn]] void bad(ErrorKind kind, const std::string& message) const {
    fail(kind, line_ref(origin, line_no) + ": " + message);
  }

  static std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        return fields;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
  }

  std::uint64_t parse_count(const std::string& text) const {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      bad(ErrorKind::FormatError, "expected an unsigned integer, got '" + text + "'");
    }
    return value;
  }

  double parse_prob(const std::string& text) const {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      bad(ErrorKind::FormatError, "expected a decimal number, got '" + text + "'");
    }
    return value;
  }

  ExtTagId parse_ext_tag(const std::string& code) const {
    if (code == kBosCode) return model.counts.bos();
    if (code == kEosCode) return model.counts.eos();
    return static_cast<ExtTagId>(parse_tag(code));
  }

  TagId parse_tag(const std::string& code) const {
    const SemTag* tag = tagset.find(code);
    if (!tag) bad(ErrorKind::UnknownTag, "unknown tag code '" + code + "'");
    return tag->id;
  }

  void expect_fields(const std::vector<std::string>& fields, std::size_t n) const {
    if (fields.size() != n) {
      bad(ErrorKind::FormatError, "expected " + std::to_string(n) + " tab-separated fields, got " +
                                      std::to_string(fields.size()));
    }
  }

  void meta_line(const std::vector<std::string>& fields) {
    expect_fields(fields, 2);
    const std::string& key = fields[0];
    const std::string& value = fields[1];
    if (!seen_meta.insert(key).second) {
      bad(ErrorKind::FormatError, "duplicate meta key '" + key + "'");
    }
    if (key == "format-version") {
      if (parse_count(value) != kModelFormatVersion) {
        bad(ErrorKind::FormatError, "unsupported model format version '" + value + "'");
      }
    } else if (key == "tagset-version") {
      if (value != tagset.version()) {
        bad(ErrorKind::FormatError, "model was trained against tagset version '" + value +
                                        "', expected '" + tagset.version() + "'");
      }
    } else if (key == "beam-width") {
      model.beam_width = static_cast<std::size_t>(parse_count(value));
    } else if (key == "max-suffix-len") {
      model.suffix.max_suffix_len = static_cast<std::size_t>(parse_count(value));
    } else if (key == "rare-threshold") {
      model.suffix.rare_threshold = parse_count(value);
    } else if (key == "token-total") {
      model.counts.token_total = parse_count(value);
    } else if (key == "sentence-total") {
      model.counts.sentence_total = parse_count(value);
    } else if (key == "theta") {
      model.suffix.theta = parse_prob(value);
    } else {
      bad(ErrorKind::FormatError, "unknown meta key '" + key + "'");
    }
  }

  void lambdas_line(const std::vector<std::string>& fields) {
    expect_fields(fields, 2);
    if (!seen_meta.insert("lambda:" + fields[0]).second) {
      bad(ErrorKind::FormatError, "duplicate lambda '" + fields[0] + "'");
    }
    if (fields[0] == "l1") {
      model.lambdas.l1 = parse_prob(fields[1]);
    } else if (fields[0] == "l2") {
      model.lambdas.l2 = parse_prob(fields[1]);
    } else if (fields[0] == "l3") {
      model.lambdas.l3 = parse_prob(fields[1]);
    } else {
      bad(ErrorKind::FormatError, "unknown lambda '" + fields[0] + "'");
    }
  }

  void unigram_line(const std::vector<std::string>& fields) {
    expect_fields(fields, 2);
    const ExtTagId tag = parse_ext_tag(fields[0]);
    if (model.counts.unigram[tag] != 0) {
      bad(ErrorKind::FormatError, "duplicate unigram row for '" + fields[0] + "'");
    }
    model.counts.unigram[tag] = parse_count(fields[1]);
  }

  void bigram_line(const std::vector<std::string>& fields) {
    expect_fields(fields, 3);
    const std::array<ExtTagId, 2> key{parse_ext_tag(fields[0]), parse_ext_tag(fields[1])};
    if (!model.counts.bigram.emplace(key, parse_count(fields[2])).second) {
      bad(ErrorKind::FormatError, "duplicate bigram row");
    }
  }

  void trigram_line(const std::vector<std::string>& fields) {
    expect_fields(fields, 4);
    const std::array<ExtTagId, 3> key{parse_ext_tag(fields[0]), parse_ext_tag(fields[1]),
                                      parse_ext_tag(fields[2])};
    if (!model.counts.trigram.emplace(key, parse_count(fields[3])).second) {
      bad(ErrorKind::FormatError, "duplicate trigram row");
    }
  }

  void lexicon_line(const std::vector<std::string>& fields) {
    expect_fields(fields, 3);
    if (fields[0].empty()) bad(ErrorKind::FormatError, "empty surface in lexicon row");
    auto& cell = model.counts.word_tag[fields[0]];
    if (!cell.emplace(parse_tag(fields[1]), parse_count(fields[2])).second) {
      bad(ErrorKind::FormatError, "duplicate lexicon row for '" + fields[0] + "'");
    }
  }

  void suffix_line(const std::vector<std::string>& fields,
                   std::map<std::string, std::map<TagId, double>>& table) {
    expect_fields(fields, 3);
    auto& cell = table[fields[0]];
    if (!cell.emplace(parse_tag(fields[1]), parse_prob(fields[2])).second) {
      bad(ErrorKind::FormatError, "duplicate suffix row for '" + fields[0] + "'");
    }
  }

  TrigramModel parse() {
    static const std::set<std::string> kSections{"[meta]",    "[lambdas]",      "[unigram]",
                                                 "[bigram]",  "[trigram]",      "[lexicon]",
                                                 "[suffix-lower]", "[suffix-upper]"};
    std::string section;
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (!kSections.count(line)) {
          bad(ErrorKind::FormatError, "unknown section '" + line + "'");
        }
        if (!seen_sections.insert(line).second) {
          bad(ErrorKind::FormatError, "duplicate section '" + line + "'");
        }
        section = line;
        continue;
      }
      if (section.empty()) {
        bad(ErrorKind::FormatError, "data before the first section header");
      }
      const std::vector<std::string> fields = split_fields(line);
      if (section == "[meta]") {
        meta_line(fields);
      } else if (section == "[lambdas]") {
        lambdas_line(fields);
      } else if (section == "[unigram]") {
        unigram_line(fields);
      } else if (section == "[bigram]") {
        bigram_line(fields);
      } else if (section == "[trigram]") {
        trigram_line(fields);
      } else if (section == "[lexicon]") {
        lexicon_line(fields);
      } else if (section == "[suffix-lower]") {
        suffix_line(fields, model.suffix.lower);
      } else if (section == "[suffix-upper]") {
        suffix_line(fields, model.suffix.upper);
      }
    }
    line_no += 1;  // report omissions at end-of-file
    for (const std::string& name : kSections) {
      if (!seen_sections.count(name)) {
        bad(ErrorKind::FormatError, "missing section '" + name + "'");
      }
    }
    static const char* kRequiredMeta[] = {"format-version", "tagset-version",  "beam-width",
                                          "max-suffix-len", "rare-threshold",  "token-total",
                                          "sentence-total", "theta"};
    for (const char* key : kRequiredMeta) {
      if (!seen_meta.count(key)) {
        bad(ErrorKind::FormatError, std::string("missing meta key '") + key + "'");
      }
    }
    for (const char* key : {"l1", "l2", "l3"}) {
      if (!seen_meta.count(std::string("lambda:") + key)) {
        bad(ErrorKind::FormatError, std::string("missing lambda '") + key + "'");
      }
    }
    return std::move(model);
  }
};

}  // namespace detail

inline TrigramModel load_model(std::istream& in, const Tagset& tagset = Tagset::builtin(),
                               const std::string& origin = "<model>") {
  detail::ModelParser parser(in, tagset, origin);
  return parser.parse();
}

inline TrigramModel load_model_file(const std::string& path,
                                    const Tagset& tagset = Tagset::builtin()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open model file '" + path + "'");
  return load_model(in, tagset, path);
}

}  // namespace semtag
