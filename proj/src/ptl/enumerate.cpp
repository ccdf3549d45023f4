#include "tdlite/ptl/enumerate.hpp"

namespace tdlite::ptl {

std::optional<UPWord> enumerate_ptl(const F& f, const EnumBounds& b) {
  std::vector<std::string> vars = variables(f);
  if ((int)vars.size() > b.vars) vars.resize(b.vars);

  UPWord w;
  w.vars = vars;
  int nv = (int)vars.size();
  // Smaller shapes first so the first model found is minimal in total size.
  for (int L = 1; L <= b.left_period; ++L)
    for (int R = 1; R <= b.right_period; ++R)
      for (int W = 1; W <= b.window; ++W) {
        w.from = -(W / 2);
        w.to = w.from + W - 1;
        int cells = nv * (L + W + R);
        if (cells >= 63) continue;
        w.left.assign(L, std::vector<bool>(nv, false));
        w.window.assign(W, std::vector<bool>(nv, false));
        w.right.assign(R, std::vector<bool>(nv, false));
        for (unsigned long long bits = 0; bits < (1ULL << cells); ++bits) {
          unsigned long long x = bits;
          for (auto* part : {&w.left, &w.window, &w.right})
            for (auto& row : *part)
              for (int v = 0; v < nv; ++v) { row[v] = x & 1; x >>= 1; }
          if (eval_up(f, w, 0)) return w;
        }
      }
  return std::nullopt;
}

}  // namespace tdlite::ptl
