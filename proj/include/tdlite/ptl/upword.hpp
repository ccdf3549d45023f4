// Ultimately periodic bi-infinite assignments: left loop + window + right loop.
#pragma once

#include <string>
#include <vector>

namespace tdlite::ptl {

struct UPWord {
  std::vector<std::string> vars;
  // Each entry is one instant's assignment, indexed like vars.
  std::vector<std::vector<bool>> left;    // repeats leftward of the window
  std::vector<std::vector<bool>> window;  // instants from..to inclusive
  std::vector<std::vector<bool>> right;   // repeats rightward of the window
  long from = 0, to = -1;

  bool valid() const;
  // Assignment at an arbitrary instant.
  const std::vector<bool>& at(long n) const;
  bool value(long n, const std::string& v) const;
  std::string to_json() const;
};

UPWord upword_from_json(const std::string& text);

}  // namespace tdlite::ptl
