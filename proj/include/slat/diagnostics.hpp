#pragma once

#include <string>
#include <vector>

namespace slat {

/// One validation finding: a JSON-pointer-like path into the input and a reason.
struct Diagnostic {
  std::string path;
  std::string reason;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

}  // namespace slat
