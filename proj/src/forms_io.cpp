#include <fstream>
#include <sstream>

#include "ez/forms.hpp"
#include "json.hpp"

namespace ez {

std::string form_to_json(const QuadraticForm& q) {
  nlohmann::json j;
  j["k"] = q.k();
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < q.k(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < q.k(); ++c) row.push_back(q.gram(i, c));
    rows.push_back(row);
  }
  j["gram"] = rows;
  return j.dump();
}

QuadraticForm form_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::bad_input, std::string("form JSON parse error: ") + e.what());
  }
  if (!j.contains("k") || !j.contains("gram")) fail(errc::bad_input, "form JSON needs 'k' and 'gram'");
  int k = j["k"].get<int>();
  if (!j["gram"].is_array() || j["gram"].size() != static_cast<std::size_t>(k))
    fail(errc::bad_input, "gram must be a k x k array");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(k) * k);
  for (const auto& row : j["gram"]) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(k))
      fail(errc::bad_input, "gram must be a k x k array");
    for (const auto& v : row) g.push_back(v.get<double>());
  }
  return make_form(k, g);
}

QuadraticForm load_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::bad_input, "cannot open form file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return form_from_json(ss.str());
}

}  // namespace ez
