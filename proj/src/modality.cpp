#include "evfuse/modality.hpp"

#include "evfuse/error.hpp"

namespace evfuse {

Modality Modality::other(std::string name) {
  if (name.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "empty modality name");
  }
  if (name == "audio") return audio();
  if (name == "video") return video();
  if (name == "text") return text();
  return Modality(Kind::kOther, std::move(name));
}

Modality Modality::parse(std::string_view name) {
  return other(std::string(name));
}

std::string Modality::name() const {
  switch (kind_) {
    case Kind::kAudio:
      return "audio";
    case Kind::kVideo:
      return "video";
    case Kind::kText:
      return "text";
    case Kind::kOther:
      break;
  }
  return extra_;
}

}  // namespace evfuse
