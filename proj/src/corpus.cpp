#include "agora/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "agora/error.hpp"
#include "agora/rng.hpp"
#include "agora/unicode.hpp"

namespace agora {

std::optional<Label> parse_label(std::string_view s) {
  if (s == "political" || s == "1" || s == "pol") return Label::Political;
  if (s == "non_political" || s == "non-political" || s == "0" || s == "non_pol")
    return Label::NonPolitical;
  return std::nullopt;
}

}  // namespace agora

namespace agora::corpus {

using nlohmann::json;

LabeledCorpus::LabeledCorpus(std::vector<Document> docs) : docs_(std::move(docs)) {
  std::set<std::string_view> seen;
  for (const auto& d : docs_) {
    if (d.id.empty()) throw Error("document with empty id");
    if (!seen.insert(d.id).second) throw Error("duplicate document id: " + d.id);
    if (!d.label) throw Error("unlabeled document in labeled corpus: " + d.id);
    ++counts_[index_of(*d.label)];
  }
}

std::vector<Label> LabeledCorpus::labels() const {
  std::vector<Label> out;
  out.reserve(docs_.size());
  for (const auto& d : docs_) out.push_back(*d.label);
  return out;
}

LabelMap::LabelMap(const std::map<std::string, Label>& entries) {
  for (const auto& [tag, label] : entries) map_.emplace(unicode::to_lower(tag), label);
}

LabelMap LabelMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label map: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("label map " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error("label map must be a JSON object: " + path.string());
  std::map<std::string, Label> entries;
  for (const auto& [tag, value] : j.items()) {
    auto label = value.is_string() ? parse_label(value.get<std::string>()) : std::nullopt;
    if (!label) throw Error("label map: bad label for tag '" + tag + "'");
    entries.emplace(tag, *label);
  }
  return LabelMap(entries);
}

std::optional<Label> LabelMap::lookup(std::string_view tag) const {
  auto it = map_.find(unicode::to_lower(tag));
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

Document label_from_tags(Document doc, const LabelMap& map, std::optional<Label> fallback) {
  if (map.empty()) throw Error("label_from_tags: empty label map");
  std::optional<Label> decided;
  std::vector<std::string> matched[2];
  for (const auto& tag : doc.tags) {
    if (auto l = map.lookup(tag)) {
      if (!decided) decided = l;
      matched[index_of(*l)].push_back(tag);
    }
  }
  if (!matched[0].empty() && !matched[1].empty()) {
    std::string msg = "conflicting tags for document '" + doc.id + "':";
    for (const auto& t : matched[1]) msg += " " + t + "(political)";
    for (const auto& t : matched[0]) msg += " " + t + "(non_political)";
    throw Error(msg);
  }
  doc.label = decided ? decided : fallback;
  return doc;
}

namespace {

Document parse_line(const std::string& line, std::size_t lineno) {
  auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(where() + "malformed JSON (" + e.what() + ")");
  }
  if (!j.is_object()) throw Error(where() + "expected a JSON object");
  auto str_field = [&](const char* key, bool required) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
      if (required) throw Error(where() + "missing \"" + key + "\"");
      return {};
    }
    if (!it->is_string()) throw Error(where() + "\"" + key + "\" must be a string");
    return it->get<std::string>();
  };
  Document d;
  d.id = str_field("id", true);
  if (d.id.empty()) throw Error(where() + "empty \"id\"");
  d.text = str_field("text", true);
  d.source = str_field("source", false);
  if (auto it = j.find("tags"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw Error(where() + "\"tags\" must be an array");
    for (const auto& t : *it) {
      if (!t.is_string()) throw Error(where() + "\"tags\" entries must be strings");
      d.tags.push_back(t.get<std::string>());
    }
  }
  if (auto raw = str_field("label", false); !raw.empty()) {
    d.label = parse_label(raw);
    if (!d.label) throw Error(where() + "unknown label '" + raw + "'");
  }
  return d;
}

}  // namespace

std::vector<Document> read_jsonl(std::istream& in, const LoadOptions& opts) {
  std::vector<Document> docs;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Document d = parse_line(line, lineno);
    if (!ids.insert(d.id).second) throw Error("duplicate document id: " + d.id);
    if (!d.label && opts.label_map && !opts.label_map->empty())
      d = label_from_tags(std::move(d), *opts.label_map, opts.fallback);
    else if (!d.label)
      d.label = opts.fallback;
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<Document> load_jsonl(const std::filesystem::path& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus: " + path.string());
  try {
    return read_jsonl(in, opts);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

LabeledCorpus load_labeled_jsonl(const std::filesystem::path& path, const LoadOptions& opts) {
  auto docs = load_jsonl(path, opts);
  for (const auto& d : docs)
    if (!d.label) throw Error(path.string() + ": document '" + d.id + "' has no label");
  return LabeledCorpus(std::move(docs));
}

void write_jsonl(std::ostream& out, const std::vector<Document>& docs) {
  for (const auto& d : docs) {
    json j;
    j["id"] = d.id;
    j["text"] = d.text;
    if (!d.source.empty()) j["source"] = d.source;
    if (!d.tags.empty()) j["tags"] = d.tags;
    if (d.label) j["label"] = std::string(to_string(*d.label));
    out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

void save_jsonl(const std::filesystem::path& path, const std::vector<Document>& docs) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write: " + path.string());
  write_jsonl(out, docs);
}

std::size_t test_count(std::size_t n, double fraction) {
  // The epsilon keeps exact halves (e.g. 2.5 computed as 2.4999999999) rounding up.
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 0.5 + 1e-9));
}

std::pair<LabeledCorpus, LabeledCorpus> split_train_test(const LabeledCorpus& corpus,
                                                         const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
    throw Error("test_fraction must lie strictly between 0 and 1");
  if (corpus.empty()) throw Error("cannot split an empty corpus");
  if (spec.stratified && !corpus.has_both_classes())
    throw Error("stratified split needs at least one document per class");

  const auto& docs = corpus.documents();
  std::vector<std::vector<std::size_t>> groups;
  if (spec.stratified) {
    groups.resize(2);
    for (std::size_t i = 0; i < docs.size(); ++i) groups[index_of(*docs[i].label)].push_back(i);
  } else {
    groups.emplace_back(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) groups[0][i] = i;
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<bool> in_test(docs.size(), false);
  std::size_t n_test = 0;
  for (auto& g : groups) {
    seeded_shuffle(std::span(g), rng);
    const std::size_t k = test_count(g.size(), spec.test_fraction);
    for (std::size_t i = 0; i < k; ++i) in_test[g[i]] = true;
    n_test += k;
  }
  if (n_test == 0 || n_test == docs.size())
    throw Error("split would leave an empty train or test side (test size " +
                std::to_string(n_test) + " of " + std::to_string(docs.size()) + ")");

  std::vector<Document> train, test;
  for (std::size_t i = 0; i < docs.size(); ++i) (in_test[i] ? test : train).push_back(docs[i]);
  return {LabeledCorpus(std::move(train)), LabeledCorpus(std::move(test))};
}

namespace {

std::string_view strip_scheme(std::string_view s) {
  if (auto p = s.find("://"); p != std::string_view::npos) s.remove_prefix(p + 3);
  return s;
}

std::string_view host_of(std::string_view source) {
  source = strip_scheme(source);
  source = source.substr(0, source.find_first_of("/?#"));
  if (auto at = source.rfind('@'); at != std::string_view::npos) source.remove_prefix(at + 1);
  source = source.substr(0, source.find(':'));
  while (!source.empty() && source.back() == '.') source.remove_suffix(1);
  return source;
}

}  // namespace

Denylist::Denylist(std::vector<std::string> patterns) {
  for (auto& p : patterns) {
    if (p.empty()) throw Error("denylist patterns must be non-empty");
    patterns_.push_back(unicode::ascii_lower(p));
  }
}

Denylist Denylist::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open denylist: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("denylist " + path.string() + ": " + e.what());
  }
  if (!j.is_array()) throw Error("denylist must be a JSON array of strings");
  std::vector<std::string> patterns;
  for (const auto& p : j) {
    if (!p.is_string()) throw Error("denylist must be a JSON array of strings");
    patterns.push_back(p.get<std::string>());
  }
  return Denylist(std::move(patterns));
}

bool Denylist::matches(std::string_view source) const {
  if (source.empty() || patterns_.empty()) return false;
  const std::string lowered = unicode::ascii_lower(source);
  const std::string_view url = strip_scheme(lowered);
  const std::string_view host = host_of(lowered);
  for (const auto& pat : patterns_) {
    if (pat.find('/') != std::string::npos) {
      if (url.starts_with(strip_scheme(pat))) return true;
      continue;
    }
    if (host == pat) return true;
    if (host.size() > pat.size() && host.ends_with(pat) &&
        host[host.size() - pat.size() - 1] == '.')
      return true;
  }
  return false;
}

std::vector<Document> filter_denylist(std::vector<Document> docs, const Denylist& denylist) {
  std::erase_if(docs, [&](const Document& d) { return denylist.matches(d.source); });
  return docs;
}

}  // namespace agora::corpus
