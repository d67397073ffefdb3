#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evfuse {

/// Alias target marking a label that exists in some corpus but lies outside
/// the prediction space.
inline constexpr std::string_view kUnseen = "unseen";

/// A ground-truth label after alias resolution. Unseen labels keep their
/// (normalised) external name and have no class index.
struct Truth {
  std::string label;
  std::optional<std::size_t> class_index;

  bool seen() const noexcept { return class_index.has_value(); }
  bool operator==(const Truth&) const = default;
};

class LabelTaxonomy {
 public:
  LabelTaxonomy(std::vector<std::string> classes, std::size_t neutral_index,
                std::map<std::string, std::string> aliases = {});

  /// anger, disgust, fear, joy, neutral, sadness, surprise, with the
  /// RAVDESS / CREMA-D / MEAD alias table.
  static LabelTaxonomy default_taxonomy();

  /// Reads the key-value configuration format (see docs/formats.md).
  static LabelTaxonomy parse(std::istream& in);
  static LabelTaxonomy load(const std::string& path);

  std::size_t size() const noexcept { return classes_.size(); }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t neutral_index() const noexcept { return neutral_index_; }
  const std::string& neutral() const { return classes_[neutral_index_]; }
  const std::map<std::string, std::string>& aliases() const noexcept { return aliases_; }

  std::optional<std::size_t> index_of(std::string_view canonical) const;

  /// Case-insensitive; surrounding whitespace ignored. Canonical names map
  /// to themselves, aliases to their target, everything else is unseen.
  Truth resolve(std::string_view label) const;

  /// Writes the configuration format; parse(write(t)) == t.
  void write(std::ostream& out) const;

  bool operator==(const LabelTaxonomy&) const = default;

 private:
  std::vector<std::string> classes_;
  std::size_t neutral_index_;
  std::map<std::string, std::string> aliases_;
};

std::string normalize_label(std::string_view label);

}  // namespace evfuse
