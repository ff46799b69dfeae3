#pragma once

// The universal semantic tagset: a closed, versioned vocabulary of sem-tags
// grouped under coarse meta-tags. The table is compiled in from the same
// declarative text that ships as data/semtagset-0.7.tsv, so every component
// can validate tags without configuration.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "semtag/error.hpp"

namespace semtag {

using TagId = std::uint8_t;   // position in canonical table order
using MetaId = std::uint8_t;  // position in canonical meta order

struct SemTag {
  std::string code;   // 3 uppercase ASCII letters or digits
  std::string gloss;
  std::vector<std::string> examples;
  TagId id = 0;
  MetaId meta = 0;
  bool new_in_v07 = false;

  bool operator==(const SemTag& other) const { return code == other.code; }
};

struct MetaTag {
  std::string code;
  std::string gloss;
  MetaId id = 0;
  std::vector<TagId> members;  // canonical order, non-empty
};

namespace detail {

// Meta-tag class names. Record order fixes the canonical meta order.
inline const std::vector<std::pair<std::string, std::string>>& meta_glosses() {
  static const std::vector<std::pair<std::string, std::string>> kGlosses = {
      {"ANA", "anaphoric"},      {"ACT", "speech act"},
      {"ATT", "attribute"},      {"COM", "comparative"},
      {"UNE", "unnamed entity"}, {"DXS", "deixis"},
      {"LOG", "logical"},        {"MOD", "modality"},
      {"DSC", "discourse"},      {"NAM", "named entity"},
      {"EVE", "events"},         {"TNS", "tense & aspect"},
      {"TIM", "temporal entity"},
  };
  return kGlosses;
}

// Tags introduced by v0.7 relative to v0.6 (the asterisked table entries).
inline const std::set<std::string, std::less<>>& new_in_v07_codes() {
  static const std::set<std::string, std::less<>> kNew = {
      "QUC", "QUV", "COL", "DEG", "GRP", "DXP", "DXT", "DXD",
      "GPO", "CTC", "LIT", "NTH", "DAT", "PRG", "PFT",
  };
  return kNew;
}

// Identical to data/semtagset-0.7.tsv; kept in sync by a unit test.
inline constexpr std::string_view kBuiltinTagsetText =
    R"(# Universal semantic tagset v0.7
# One record per sem-tag: code<TAB>meta<TAB>gloss<TAB>example1|example2|...
PRO	ANA	anaphoric & deictic pronouns	he|she|I|him
DEF	ANA	definite	the|lo|der
HAS	ANA	possessive pronoun	my|her
REF	ANA	reflexive & reciprocal pron.	herself|each~other
EMP	ANA	emphasizing pronouns	himself
GRE	ACT	greeting & parting	hi|bye
ITJ	ACT	interjections, exclamations	alas|ah
HES	ACT	hesitation	err
QUE	ACT	interrogative	who|which|?
QUC	ATT	concrete quantity	two|six~million|twice
QUV	ATT	vague quantity	millions|many|enough
COL	ATT	colour	red|crimson|light~blue|chestnut~brown
IST	ATT	intersective	open|vegetarian|quickly
SST	ATT	subsective	skillful|tall
PRI	ATT	privative	former|fake
DEG	ATT	degree	tall|old
INT	ATT	intensifier	very|much|too|rather
REL	ATT	relation	in|on|'s|of|after
SCO	ATT	score	3-0|A
EQU	COM	equative	as|are
MOR	COM	comparative positive	better|more
LES	COM	comparative negative	less|worse
TOP	COM	superlative positive	most|mostly
BOT	COM	superlative negative	worst|least
ORD	COM	ordinal	1st|3rd|third
CON	UNE	concept	dog|person
ROL	UNE	role	student|brother|prof.|victim
GRP	UNE	group	,|and|group
DXP	DXS	place deixis	here|this|above
DXT	DXS	temporal deixis	just|later|tomorrow
DXD	DXS	discourse deixis	latter|former|above
ALT	LOG	alternative & repetitions	another|different|again
XCL	LOG	exclusive	only|just
NIL	LOG	empty semantics	.|to|of
DIS	LOG	disjunction & exist. quantif.	a|some|any|or
IMP	LOG	implication	if|when|unless
AND	LOG	conjunction & univ. quantif.	every|and|who|any
NOT	MOD	negation	not|no|neither|without
NEC	MOD	necessity	must|should|have
POS	MOD	possibility	might|could|perhaps|alleged|can
SUB	DSC	subordinate relations	that|while|because
COO	DSC	coordinate relations	so|,|;|and
APP	DSC	appositional relations	,|which|(|—
BUT	DSC	contrast	but|yet
PER	NAM	person	Axl~Rose|Sherlock~Holmes
GPE	NAM	geo-political entity	Paris|Japan
GPO	NAM	geo-political origin	Parisian|French
GEO	NAM	geographical location	Alps|Nile
ORG	NAM	organization	IKEA|EU
ART	NAM	artifact	iOS~7
HAP	NAM	happening	Eurovision~2017
UOM	NAM	unit of measurement	meter|$|%|degree~Celsius
CTC	NAM	contact information	112|info@mail.com
URL	NAM	URL	http://pmb.let.rug.nl
LIT	NAM	literal use of names	John
NTH	NAM	other names	1a|(1)
EXS	EVE	untensed simple	walk|eaten|destruction
ENS	EVE	present simple	walk|walks
EPS	EVE	past simple	ate|went
EXG	EVE	untensed progressive	running
EXT	EVE	untensed perfect	eaten
NOW	TNS	present tense	is|do|has|now
PST	TNS	past tense	was|had|did
FUT	TNS	future tense	will|shall
PRG	TNS	progressive	being|aan~het
PFT	TNS	perfect	been
DAT	TIM	full date	27.04.2017|27/04/17
DOM	TIM	day of month	27th
YOC	TIM	year of century	2017
DOW	TIM	day of week	Thursday
MOY	TIM	month of year	April
DEC	TIM	decade	80s|1990s
CLO	TIM	clocktime	8:45~pm|10~o'clock|noon
)";

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

inline bool valid_tag_code(std::string_view code) {
  if (code.size() != 3) return false;
  return std::all_of(code.begin(), code.end(), [](unsigned char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  });
}

}  // namespace detail

/// The sem-tag vocabulary. Immutable after construction; concurrent reads
/// are safe. Tag codes compare exactly (case-sensitive).
class Tagset {
 public:
  /// Parses the declarative one-record-per-line format. Lines starting with
  /// `#` are comments.
  static Tagset from_stream(std::istream& in, const std::string& origin = "<stream>") {
    Tagset ts;
    std::map<std::string, MetaId, std::less<>> meta_index;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      auto fields = detail::split(line, '\t');
      if (fields.size() != 4) {
        fail(ErrorKind::FormatError,
             origin + ":" + std::to_string(line_no) +
                 ": expected 4 tab-separated fields, got " +
                 std::to_string(fields.size()));
      }
      const std::string& code = fields[0];
      const std::string& meta_code = fields[1];
      if (!detail::valid_tag_code(code)) {
        fail(ErrorKind::FormatError,
             origin + ":" + std::to_string(line_no) + ": bad tag code '" + code + "'");
      }
      if (!detail::valid_tag_code(meta_code)) {
        fail(ErrorKind::FormatError,
             origin + ":" + std::to_string(line_no) + ": bad meta code '" + meta_code + "'");
      }
      if (ts.by_code_.count(code)) {
        fail(ErrorKind::FormatError,
             origin + ":" + std::to_string(line_no) + ": duplicate tag code '" + code + "'");
      }
      auto meta_it = meta_index.find(meta_code);
      if (meta_it == meta_index.end()) {
        MetaTag meta;
        meta.code = meta_code;
        meta.gloss = meta_code;
        for (const auto& [known_code, gloss] : detail::meta_glosses()) {
          if (known_code == meta_code) meta.gloss = gloss;
        }
        meta.id = static_cast<MetaId>(ts.metas_.size());
        meta_it = meta_index.emplace(meta_code, meta.id).first;
        ts.metas_.push_back(std::move(meta));
      }
      SemTag tag;
      tag.code = code;
      tag.gloss = fields[2];
      if (!fields[3].empty()) tag.examples = detail::split(fields[3], '|');
      tag.id = static_cast<TagId>(ts.tags_.size());
      tag.meta = meta_it->second;
      tag.new_in_v07 = detail::new_in_v07_codes().count(code) > 0;
      ts.by_code_.emplace(code, tag.id);
      ts.metas_[tag.meta].members.push_back(tag.id);
      ts.tags_.push_back(std::move(tag));
    }
    if (ts.tags_.empty()) {
      fail(ErrorKind::FormatError, origin + ": tagset file holds no records");
    }
    return ts;
  }

  static Tagset from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open tagset file: " + path);
    return from_stream(in, path);
  }

  /// The compiled-in v0.7 table.
  static const Tagset& builtin() {
    static const Tagset kTagset = [] {
      std::istringstream in{std::string(detail::kBuiltinTagsetText)};
      return from_stream(in, "<builtin>");
    }();
    return kTagset;
  }

  static std::string_view builtin_text() { return detail::kBuiltinTagsetText; }

  const std::vector<SemTag>& tags() const { return tags_; }
  const std::vector<MetaTag>& metas() const { return metas_; }
  std::string version() const { return "0.7"; }

  const SemTag* find(std::string_view code) const {
    auto it = by_code_.find(code);
    return it == by_code_.end() ? nullptr : &tags_[it->second];
  }

  /// Exact, case-sensitive lookup.
  const SemTag& parse(std::string_view code) const {
    const SemTag* tag = find(code);
    if (!tag) fail(ErrorKind::UnknownTag, "unknown sem-tag '" + std::string(code) + "'");
    return *tag;
  }

  const SemTag& tag(TagId id) const { return tags_.at(id); }
  const MetaTag& meta(MetaId id) const { return metas_.at(id); }
  const MetaTag& meta_of(const SemTag& tag) const { return metas_.at(tag.meta); }

  std::size_t size() const { return tags_.size(); }

 private:
  std::vector<SemTag> tags_;
  std::vector<MetaTag> metas_;
  std::map<std::string, TagId, std::less<>> by_code_;
};

}  // namespace semtag
