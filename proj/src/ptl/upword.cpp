#include "tdlite/ptl/upword.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace tdlite::ptl {

using nlohmann::json;

bool UPWord::valid() const {
  if (left.empty() || right.empty()) return false;
  if (to - from + 1 != (long)window.size()) return false;
  if (from > 0 || to < 0) return false;  // window must contain instant 0
  auto rows_ok = [&](const std::vector<std::vector<bool>>& rows) {
    return std::all_of(rows.begin(), rows.end(), [&](const std::vector<bool>& r) {
      return r.size() == vars.size();
    });
  };
  return rows_ok(left) && rows_ok(window) && rows_ok(right);
}

const std::vector<bool>& UPWord::at(long n) const {
  if (n < from) {
    long L = (long)left.size();
    // from-1 maps to the last left row, walking leftward cyclically.
    long d = (from - 1 - n) % L;
    return left[L - 1 - d];
  }
  if (n > to) {
    long R = (long)right.size();
    return right[(n - to - 1) % R];
  }
  return window[n - from];
}

bool UPWord::value(long n, const std::string& v) const {
  auto it = std::find(vars.begin(), vars.end(), v);
  if (it == vars.end()) return false;  // unmentioned variables default false
  return at(n)[it - vars.begin()];
}

static json rows_json(const std::vector<std::string>& vars,
                      const std::vector<std::vector<bool>>& rows) {
  // One boolean row per variable, columns are instants.
  json out = json::object();
  for (size_t v = 0; v < vars.size(); ++v) {
    json row = json::array();
    for (auto& r : rows) row.push_back((bool)r[v]);
    out[vars[v]] = row;
  }
  return out;
}

std::string UPWord::to_json() const {
  json j;
  j["left_loop"] = rows_json(vars, left);
  j["window"] = {{"from", from}, {"to", to}, {"rows", rows_json(vars, window)}};
  j["right_loop"] = rows_json(vars, right);
  return j.dump(2);
}

static std::vector<std::vector<bool>> rows_parse(const json& j,
                                                 std::vector<std::string>& vars,
                                                 bool fix_vars) {
  if (fix_vars) {
    vars.clear();
    for (auto it = j.begin(); it != j.end(); ++it) vars.push_back(it.key());
    std::sort(vars.begin(), vars.end());
  }
  size_t n = 0;
  for (auto& v : vars) n = std::max(n, j.at(v).size());
  std::vector<std::vector<bool>> rows(n, std::vector<bool>(vars.size(), false));
  for (size_t vi = 0; vi < vars.size(); ++vi) {
    const json& row = j.at(vars[vi]);
    if (row.size() != n) throw std::runtime_error("ragged witness rows");
    for (size_t i = 0; i < n; ++i) rows[i][vi] = row[i].get<bool>();
  }
  return rows;
}

UPWord upword_from_json(const std::string& text) {
  json j = json::parse(text);
  UPWord w;
  w.left = rows_parse(j.at("left_loop"), w.vars, true);
  w.from = j.at("window").at("from").get<long>();
  w.to = j.at("window").at("to").get<long>();
  w.window = rows_parse(j.at("window").at("rows"), w.vars, false);
  w.right = rows_parse(j.at("right_loop"), w.vars, false);
  if (!w.valid()) throw std::runtime_error("invalid witness word");
  return w;
}

}  // namespace tdlite::ptl
