#include "evfuse/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "evfuse/error.hpp"

namespace evfuse {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void config_error(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::kParse,
              "taxonomy line " + std::to_string(line) + ": " + message);
}

}  // namespace

std::string normalize_label(std::string_view label) {
  std::string out(trim(label));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

LabelTaxonomy::LabelTaxonomy(std::vector<std::string> classes, std::size_t neutral_index,
                             std::map<std::string, std::string> aliases)
    : classes_(std::move(classes)), neutral_index_(neutral_index) {
  if (classes_.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "taxonomy needs at least 2 classes");
  }
  std::set<std::string> names;
  for (auto& c : classes_) {
    c = normalize_label(c);
    if (c.empty() || c == kUnseen) {
      throw Error(ErrorKind::kInvalidArgument, "invalid class name '" + c + "'");
    }
    if (!names.insert(c).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate class name '" + c + "'");
    }
  }
  if (neutral_index_ >= classes_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "neutral index out of range");
  }
  for (const auto& [from, to] : aliases) {
    std::string key = normalize_label(from);
    std::string target = normalize_label(to);
    if (key.empty() || names.contains(key) || key == kUnseen) {
      throw Error(ErrorKind::kInvalidArgument, "invalid alias '" + key + "'");
    }
    if (target != kUnseen && !names.contains(target)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "alias '" + key + "' targets unknown class '" + target + "'");
    }
    aliases_[key] = target;
  }
}

LabelTaxonomy LabelTaxonomy::default_taxonomy() {
  return LabelTaxonomy({"anger", "disgust", "fear", "joy", "neutral", "sadness", "surprise"}, 4,
                       {{"happy", "joy"},
                        {"happiness", "joy"},
                        {"sad", "sadness"},
                        {"angry", "anger"},
                        {"calm", "unseen"},
                        {"contempt", "unseen"},
                        {"fearful", "fear"},
                        {"surprised", "surprise"}});
}

// Format:
//   # comment
//   classes = anger, disgust, ...
//   neutral = neutral
//   alias.happy = joy
LabelTaxonomy LabelTaxonomy::parse(std::istream& in) {
  std::optional<std::vector<std::string>> classes;
  std::optional<std::string> neutral;
  std::map<std::string, std::string> aliases;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error(line_no, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "classes") {
      if (classes) config_error(line_no, "classes given twice");
      classes.emplace();
      std::stringstream list{std::string(value)};
      std::string item;
      while (std::getline(list, item, ',')) classes->push_back(normalize_label(item));
    } else if (key == "neutral") {
      if (neutral) config_error(line_no, "neutral given twice");
      neutral = normalize_label(value);
    } else if (key.rfind("alias.", 0) == 0) {
      std::string name = normalize_label(key.substr(6));
      if (aliases.contains(name)) config_error(line_no, "alias '" + name + "' given twice");
      aliases[name] = normalize_label(value);
    } else {
      config_error(line_no, "unknown key '" + key + "'");
    }
  }
  if (!classes) throw Error(ErrorKind::kParse, "taxonomy: missing 'classes'");
  if (!neutral) throw Error(ErrorKind::kParse, "taxonomy: missing 'neutral'");
  auto it = std::find(classes->begin(), classes->end(), *neutral);
  if (it == classes->end()) {
    throw Error(ErrorKind::kParse, "taxonomy: neutral class '" + *neutral + "' not in classes");
  }
  const auto neutral_index = static_cast<std::size_t>(it - classes->begin());
  return LabelTaxonomy(std::move(*classes), neutral_index, std::move(aliases));
}

LabelTaxonomy LabelTaxonomy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open taxonomy file '" + path + "'");
  return parse(in);
}

std::optional<std::size_t> LabelTaxonomy::index_of(std::string_view canonical) const {
  auto it = std::find(classes_.begin(), classes_.end(), canonical);
  if (it == classes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - classes_.begin());
}

Truth LabelTaxonomy::resolve(std::string_view label) const {
  std::string name = normalize_label(label);
  if (auto idx = index_of(name)) return {std::move(name), idx};
  if (auto it = aliases_.find(name); it != aliases_.end()) {
    if (it->second == kUnseen) return {std::move(name), std::nullopt};
    return {it->second, index_of(it->second)};
  }
  return {std::move(name), std::nullopt};
}

void LabelTaxonomy::write(std::ostream& out) const {
  out << "classes = ";
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    out << (i ? ", " : "") << classes_[i];
  }
  out << "\nneutral = " << neutral() << '\n';
  for (const auto& [from, to] : aliases_) out << "alias." << from << " = " << to << '\n';
}

}  // namespace evfuse
