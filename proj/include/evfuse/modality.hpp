#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace evfuse {

/// An input channel. The three built-in channels sort before any named
/// extra channel, which keeps record iteration in canonical order.
class Modality {
 public:
  enum class Kind { kAudio = 0, kVideo = 1, kText = 2, kOther = 3 };

  static Modality audio() { return Modality(Kind::kAudio, {}); }
  static Modality video() { return Modality(Kind::kVideo, {}); }
  static Modality text() { return Modality(Kind::kText, {}); }
  static Modality other(std::string name);

  // "audio", "video", "text" map to the built-ins; anything else non-empty
  // becomes other(name). Throws on an empty name.
  static Modality parse(std::string_view name);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;

  auto operator<=>(const Modality&) const = default;

 private:
  Modality(Kind kind, std::string extra) : kind_(kind), extra_(std::move(extra)) {}

  Kind kind_;
  std::string extra_;
};

}  // namespace evfuse
