#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lagro/error.hpp"
#include "lagro/instances.hpp"

namespace lagro {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw InputError(origin_ + ": " + where + ": " + what);
  }

  const json& member(const json& obj, const std::string& key, const std::string& where) const {
    if (!obj.is_object()) fail(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, "missing key \"" + key + "\"");
    return *it;
  }

  std::size_t count(const json& v, const std::string& where) const {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail(where, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  Scalar scalar(const json& v, const std::string& where) const {
    if (v.is_number_integer()) {
      return v.is_number_unsigned() ? Scalar(Integer(std::to_string(v.get<std::uint64_t>())))
                                    : Scalar(Integer(std::to_string(v.get<std::int64_t>())));
    }
    if (v.is_string()) {
      try {
        return parse_scalar(v.get<std::string>());
      } catch (const InputError& e) {
        fail(where, e.what());
      }
    }
    if (v.is_number_float()) fail(where, "floating-point literals are not allowed; use \"p/q\" strings");
    fail(where, "expected a rational (integer or \"p/q\" string)");
  }

  Vec vec(const json& v, std::size_t n, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array");
    if (v.size() != n) fail(where, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
    Vec out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(scalar(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
  }

  Mat mat(const json& v, std::size_t rows, std::size_t cols, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array of rows");
    if (v.size() != rows) {
      fail(where, "expected " + std::to_string(rows) + " rows, got " + std::to_string(v.size()));
    }
    Mat out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const Vec row = vec(v[r], cols, where + "[" + std::to_string(r) + "]");
      std::copy(row.begin(), row.end(), out.row(r).begin());
    }
    return out;
  }

  std::vector<Vec> points(const json& v, std::size_t n, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array of points");
    std::vector<Vec> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(vec(v[k], n, where + "[" + std::to_string(k) + "]"));
    return out;
  }

  std::vector<std::vector<std::size_t>> index_sets(const json& v, std::size_t np, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array of index arrays");
    if (v.size() != np) fail(where, "expected " + std::to_string(np) + " index arrays");
    std::vector<std::vector<std::size_t>> out(np);
    for (std::size_t j = 0; j < np; ++j) {
      const std::string w = where + "[" + std::to_string(j) + "]";
      if (!v[j].is_array()) fail(w, "expected an array of row indices");
      for (std::size_t k = 0; k < v[j].size(); ++k) out[j].push_back(count(v[j][k], w + "[" + std::to_string(k) + "]"));
    }
    return out;
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
};

void read_common(const Reader& rd, const json& doc, ProblemData& d) {
  const json& dims = rd.member(doc, "dims", "dims");
  d.n1 = rd.count(rd.member(dims, "n1", "dims"), "dims.n1");
  d.nc2 = rd.count(rd.member(dims, "nc2", "dims"), "dims.nc2");
  d.nd2 = rd.count(rd.member(dims, "nd2", "dims"), "dims.nd2");
  d.np = rd.count(rd.member(dims, "np", "dims"), "dims.np");
  d.m = rd.count(rd.member(dims, "m", "dims"), "dims.m");

  d.c0 = rd.vec(rd.member(doc, "c0", "<root>"), d.n1, "c0");
  d.C = rd.mat(rd.member(doc, "C", "<root>"), d.n1, d.np, "C");
  d.d0 = rd.vec(rd.member(doc, "d0", "<root>"), d.n2(), "d0");
  d.Dc = rd.mat(rd.member(doc, "Dc", "<root>"), d.nc2, d.np, "Dc");
  d.Dd = rd.mat(rd.member(doc, "Dd", "<root>"), d.nd2, d.np, "Dd");
  d.T = rd.mat(rd.member(doc, "T", "<root>"), d.m, d.n1, "T");
  d.Wc = rd.mat(rd.member(doc, "Wc", "<root>"), d.m, d.nc2, "Wc");
  d.Wd = rd.mat(rd.member(doc, "Wd", "<root>"), d.m, d.nd2, "Wd");
  d.h0 = rd.vec(rd.member(doc, "h0", "<root>"), d.m, "h0");

  const json& x = rd.member(doc, "X", "<root>");
  d.X = rd.points(rd.member(x, "points", "X"), d.n1, "X.points");

  const json& xi = rd.member(doc, "Xi", "<root>");
  if (!xi.is_object()) rd.fail("Xi", "expected an object");
  if (xi.contains("budget")) {
    if (xi.contains("points")) rd.fail("Xi", "give either \"points\" or \"budget\", not both");
    const auto budget = rd.count(xi["budget"], "Xi.budget");
    d.xi_budget = static_cast<unsigned>(budget);
    try {
      d.Xi = expand_budget(d.np, *d.xi_budget);
    } catch (const LimitExceeded& e) {
      rd.fail("Xi.budget", e.what());
    }
  } else {
    d.Xi = rd.points(rd.member(xi, "points", "Xi"), d.np, "Xi.points");
  }

  const json& y = rd.member(doc, "Y", "<root>");
  const json& ycu = rd.member(y, "yc_upper", "Y");
  if (!ycu.is_array() || ycu.size() != d.nc2) {
    rd.fail("Y.yc_upper", "expected an array of " + std::to_string(d.nc2) + " entries");
  }
  d.yc_upper.clear();
  for (std::size_t j = 0; j < d.nc2; ++j) {
    d.yc_upper.push_back(ycu[j].is_null() ? Bound() : Bound(rd.scalar(ycu[j], "Y.yc_upper[" + std::to_string(j) + "]")));
  }
  d.yd_lower = rd.vec(rd.member(y, "yd_lower", "Y"), d.nd2, "Y.yd_lower");
  d.yd_upper = rd.vec(rd.member(y, "yd_upper", "Y"), d.nd2, "Y.yd_upper");

  if (doc.contains("bounds")) {
    const json& b = doc["bounds"];
    BoxBounds box;
    box.x_lower = rd.vec(rd.member(b, "x_lower", "bounds"), d.n1, "bounds.x_lower");
    box.x_upper = rd.vec(rd.member(b, "x_upper", "bounds"), d.n1, "bounds.x_upper");
    box.y_lower = rd.vec(rd.member(b, "y_lower", "bounds"), d.n2(), "bounds.y_lower");
    box.y_upper = rd.vec(rd.member(b, "y_upper", "bounds"), d.n2(), "bounds.y_upper");
    d.bounds = std::move(box);
  }
}

json write_vec(const Vec& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(to_string(s));
  return out;
}

json write_mat(const Mat& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(write_vec(Vec(m.row(r).begin(), m.row(r).end())));
  return out;
}

json write_points(const std::vector<Vec>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(write_vec(p));
  return out;
}

json write_sets(const std::vector<std::vector<std::size_t>>& sets) {
  json out = json::array();
  for (const auto& s : sets) out.push_back(s);
  return out;
}

json write_common(const ProblemData& d) {
  json doc;
  doc["dims"] = {{"n1", d.n1}, {"nc2", d.nc2}, {"nd2", d.nd2}, {"np", d.np}, {"m", d.m}};
  doc["c0"] = write_vec(d.c0);
  doc["C"] = write_mat(d.C);
  doc["d0"] = write_vec(d.d0);
  doc["Dc"] = write_mat(d.Dc);
  doc["Dd"] = write_mat(d.Dd);
  doc["T"] = write_mat(d.T);
  doc["Wc"] = write_mat(d.Wc);
  doc["Wd"] = write_mat(d.Wd);
  doc["h0"] = write_vec(d.h0);
  doc["X"] = {{"points", write_points(d.X)}};
  if (d.xi_budget) {
    doc["Xi"] = {{"budget", *d.xi_budget}};
  } else {
    doc["Xi"] = {{"points", write_points(d.Xi)}};
  }
  json ycu = json::array();
  for (const auto& u : d.yc_upper) ycu.push_back(u ? json(to_string(*u)) : json(nullptr));
  doc["Y"] = {{"yc_upper", ycu}, {"yd_lower", write_vec(d.yd_lower)}, {"yd_upper", write_vec(d.yd_upper)}};
  if (d.bounds) {
    doc["bounds"] = {{"x_lower", write_vec(d.bounds->x_lower)},
                     {"x_upper", write_vec(d.bounds->x_upper)},
                     {"y_lower", write_vec(d.bounds->y_lower)},
                     {"y_upper", write_vec(d.bounds->y_upper)}};
  }
  return doc;
}

}  // namespace

Instance parse_instance(std::string_view text, std::string_view origin) {
  const Reader rd{std::string(origin)};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    rd.fail("parse", e.what());
  }
  if (!doc.is_object()) rd.fail("<root>", "expected a JSON object");
  const json& kind = rd.member(doc, "kind", "<root>");
  if (!kind.is_string()) rd.fail("kind", "expected \"general\" or \"indicator\"");

  try {
    if (kind == "general") {
      GeneralInstance inst;
      read_common(rd, doc, inst);
      inst.H = rd.mat(rd.member(doc, "H", "<root>"), inst.m, inst.np, "H");
      inst.validate();
      return inst;
    }
    if (kind == "indicator") {
      IndicatorInstance inst;
      read_common(rd, doc, inst);
      inst.I0 = rd.index_sets(rd.member(doc, "I0", "<root>"), inst.np, "I0");
      inst.I1 = rd.index_sets(rd.member(doc, "I1", "<root>"), inst.np, "I1");
      inst.validate();
      return inst;
    }
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(rd.origin(), 0) == 0) throw;
    rd.fail("validation", msg);
  } catch (const LimitExceeded& e) {
    rd.fail("validation", e.what());
  }
  rd.fail("kind", "expected \"general\" or \"indicator\", got " + kind.dump());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_instance(text.str(), path.string());
}

std::string serialize_instance(const Instance& inst) {
  json doc;
  if (const auto* g = std::get_if<GeneralInstance>(&inst)) {
    doc = write_common(*g);
    doc["kind"] = "general";
    doc["H"] = write_mat(g->H);
  } else {
    const auto& ind = std::get<IndicatorInstance>(inst);
    doc = write_common(ind);
    doc["kind"] = "indicator";
    doc["I0"] = write_sets(ind.I0);
    doc["I1"] = write_sets(ind.I1);
  }
  return doc.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << serialize_instance(inst);
}

}  // namespace lagro
