#include "closedloft/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "closedloft/version.hpp"

namespace closedloft {

using nlohmann::json;

namespace {

std::string at_row_point(Index row, Index point) {
  std::ostringstream s;
  s << "row " << row << ", point " << point;
  return s.str();
}

void check_json(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::parse, what, "parse");
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann's message carries the line and column
    fail(ErrorKind::parse, e.what(), "parse");
  }
}

double number(const json& j, const std::string& what) {
  check_json(j.is_number(), what + " must be a number");
  return j.get<double>();
}

Index integer(const json& j, const std::string& what) {
  check_json(j.is_number_integer(), what + " must be an integer");
  return j.get<Index>();
}

json points_json(const Points& pts) {
  json a = json::array();
  for (Index i = 0; i < pts.rows(); ++i) a.push_back({pts(i, 0), pts(i, 1), pts(i, 2)});
  return a;
}

Points points_from(const json& j, const std::string& what) {
  check_json(j.is_array(), what + " must be an array of [x, y, z]");
  Points pts(static_cast<Index>(j.size()), 3);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    check_json(p.is_array() && p.size() == 3, what + " entry " + std::to_string(i) + " must be [x, y, z]");
    for (int c = 0; c < 3; ++c) pts(static_cast<Index>(i), c) = number(p[static_cast<std::size_t>(c)], what);
  }
  return pts;
}

const char* style_name(KnotStyle s) { return s == KnotStyle::clamped ? "clamped" : "cyclic"; }

json knots_json(const KnotVectord& kv) {
  return {{"style", style_name(kv.style)}, {"degree", kv.degree}, {"values", kv.knots}};
}

KnotVectord knots_from(const json& j, const std::string& what) {
  check_json(j.is_object(), what + " must be an object");
  KnotVectord kv;
  check_json(j.contains("values") && j["values"].is_array(), what + ".values missing");
  for (const auto& v : j["values"]) kv.knots.push_back(number(v, what + ".values"));
  check_json(j.contains("degree"), what + ".degree missing");
  kv.degree = static_cast<int>(integer(j["degree"], what + ".degree"));
  const std::string style = j.value("style", std::string("clamped"));
  if (style == "clamped")
    kv.style = KnotStyle::clamped;
  else if (style == "cyclic")
    kv.style = KnotStyle::cyclic;
  else
    fail(ErrorKind::parse, what + ".style must be clamped or cyclic", "parse");
  try {
    validate(kv);
  } catch (const Error& e) {
    fail(ErrorKind::parse, what + ": " + e.what(), "parse");
  }
  return kv;
}

json curve_json(const BSplineCurved& c) {
  return {{"closed", c.closed()}, {"degree", c.degree()}, {"knots", knots_json(c.knots)},
          {"controls", points_json(c.controls)}};
}

BSplineCurved curve_from(const json& j, const std::string& what) {
  check_json(j.is_object(), what + " must be an object");
  BSplineCurved c;
  c.kind = j.value("closed", false) ? CurveKind::closed : CurveKind::open;
  c.knots = knots_from(j.at("knots"), what + ".knots");
  c.controls = points_from(j.at("controls"), what + ".controls");
  try {
    validate(c);
  } catch (const Error& e) {
    fail(ErrorKind::parse, what + ": " + e.what(), "parse");
  }
  return c;
}

ContourFile contours_from_json(std::string_view text) {
  const json doc = parse_json(text);
  check_json(doc.is_object(), "contour file must be a JSON object");
  ContourFile file;
  if (doc.contains("version")) {
    file.version = static_cast<int>(integer(doc["version"], "version"));
    check_json(file.version == 1, "unsupported contour file version " + std::to_string(file.version));
  }
  check_json(doc.contains("rows") && doc["rows"].is_array(), "contour file needs a \"rows\" array");
  const auto& rows = doc["rows"];
  for (std::size_t i = 0; i < rows.size(); ++i)
    file.rows.rows.push_back(points_from(rows[i], "row " + std::to_string(i)));
  if (doc.contains("hints")) {
    const auto& h = doc["hints"];
    check_json(h.is_object(), "hints must be an object");
    if (h.contains("start")) {
      check_json(h["start"].is_array(), "hints.start must be an array");
      for (const auto& v : h["start"]) file.start.push_back(integer(v, "hints.start"));
    }
    if (h.contains("reverse")) {
      check_json(h["reverse"].is_array(), "hints.reverse must be an array");
      for (const auto& v : h["reverse"]) {
        check_json(v.is_boolean(), "hints.reverse entries must be booleans");
        file.reverse.push_back(v.get<bool>());
      }
    }
  }
  return file;
}

ContourFile contours_from_blocks(std::string_view text) {
  ContourFile file;
  std::vector<double> current;
  auto close_row = [&] {
    if (current.empty()) return;
    const Index n = static_cast<Index>(current.size() / 3);
    Points pts(n, 3);
    for (Index i = 0; i < n; ++i)
      for (int c = 0; c < 3; ++c) pts(i, c) = current[static_cast<std::size_t>(3 * i + c)];
    file.rows.rows.push_back(std::move(pts));
    current.clear();
  };
  std::istringstream in{std::string(text)};
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
    if (line.find_first_not_of(' ') == std::string::npos) {
      close_row();
      continue;
    }
    std::istringstream fields(line);
    std::vector<double> vals;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        std::ostringstream msg;
        msg << "line " << line_no << ": '" << tok << "' is not a number";
        fail(ErrorKind::parse, msg.str(), "parse");
      }
      vals.push_back(v);
    }
    if (vals.size() != 3) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected 3 coordinates, got " << vals.size();
      fail(ErrorKind::parse, msg.str(), "parse");
    }
    current.insert(current.end(), vals.begin(), vals.end());
  }
  close_row();
  return file;
}

void validate_hints(const ContourFile& file) {
  const auto& rows = file.rows.rows;
  if (!file.start.empty()) {
    if (file.start.size() != rows.size())
      fail(ErrorKind::invalid_input, "hints.start needs one entry per row", "validate");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (file.start[i] < 0 || file.start[i] >= rows[i].rows()) {
        std::ostringstream msg;
        msg << "row " << i << ": start index " << file.start[i] << " out of range";
        fail(ErrorKind::invalid_input, msg.str(), "validate");
      }
    }
  }
  if (!file.reverse.empty() && file.reverse.size() != rows.size())
    fail(ErrorKind::invalid_input, "hints.reverse needs one entry per row", "validate");
}

}  // namespace

void validate_rows(const ContourRows& rows) {
  if (rows.rows.empty()) fail(ErrorKind::invalid_input, "no contour rows", "validate");
  for (Index r = 0; r < rows.size(); ++r) {
    const Points& pts = rows.rows[static_cast<std::size_t>(r)];
    if (pts.rows() < 3) {
      std::ostringstream msg;
      msg << "row " << r << " has " << pts.rows() << " points; at least 3 required";
      fail(ErrorKind::invalid_input, msg.str(), "validate");
    }
    for (Index i = 0; i < pts.rows(); ++i) {
      if (!pts.row(i).allFinite())
        fail(ErrorKind::invalid_input, at_row_point(r, i) + " has a non-finite coordinate", "validate");
    }
    const double diag = bbox_diagonal(pts);
    const double tol = 1e-14 * std::max(diag, 1.0);
    for (Index i = 0; i < pts.rows(); ++i) {
      const Index prev = i == 0 ? pts.rows() - 1 : i - 1;
      if ((pts.row(i) - pts.row(prev)).norm() <= tol) {
        const Index later = std::max(i, prev);
        fail(ErrorKind::invalid_input,
             at_row_point(r, later) + " repeats point " + std::to_string(std::min(i, prev)), "validate");
      }
    }
  }
}

ContourFile parse_contours(std::string_view text, ContourFormat format) {
  if (format == ContourFormat::automatic) {
    const auto first = text.find_first_not_of(" \t\r\n");
    format = first != std::string_view::npos && text[first] == '{' ? ContourFormat::json : ContourFormat::blocks;
  }
  ContourFile file = format == ContourFormat::json ? contours_from_json(text) : contours_from_blocks(text);
  validate_rows(file.rows);
  validate_hints(file);
  return file;
}

ContourFile read_contours(const std::string& path, ContourFormat format) {
  if (format == ContourFormat::automatic && (path.ends_with(".csv") || path.ends_with(".txt")))
    format = ContourFormat::blocks;
  return parse_contours(read_file(path), format);
}

ContourRows hinted_rows(const ContourFile& file) {
  if (!file.has_hints()) return file.rows;
  const std::size_t m = file.rows.rows.size();
  std::vector<Index> start = file.start.empty() ? std::vector<Index>(m, 0) : file.start;
  std::vector<bool> reverse = file.reverse.empty() ? std::vector<bool>(m, false) : file.reverse;
  return apply_alignment(file.rows, start, reverse);
}

std::string contours_to_json(const ContourFile& file) {
  json rows = json::array();
  for (const auto& r : file.rows.rows) rows.push_back(points_json(r));
  json doc = {{"version", file.version}, {"rows", rows}};
  if (file.has_hints()) {
    json h = json::object();
    if (!file.start.empty()) h["start"] = file.start;
    if (!file.reverse.empty()) h["reverse"] = file.reverse;
    doc["hints"] = h;
  }
  return doc.dump(1) + "\n";
}

std::string contours_to_blocks(const ContourFile& file) {
  std::string out;
  char buf[96];
  for (std::size_t r = 0; r < file.rows.rows.size(); ++r) {
    if (r) out += '\n';
    const auto& pts = file.rows.rows[r];
    for (Index i = 0; i < pts.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", pts(i, 0), pts(i, 1), pts(i, 2));
      out += buf;
    }
  }
  return out;
}

std::string serialize_surface(const SurfaceFile& file) {
  const auto& s = file.surface;
  const auto& p = file.provenance;
  json doc = {{"version", 1},
              {"kind", "bspline-surface"},
              {"degree_u", s.degree_u()},
              {"degree_v", s.degree_v()},
              {"knots_u", knots_json(s.knots_u)},
              {"knots_v", knots_json(s.knots_v)},
              {"rows", s.rows},
              {"cols", s.cols},
              {"closed_v", s.closed_v},
              {"net", points_json(s.net)},
              {"provenance",
               {{"method", p.method},
                {"per", p.per},
                {"alpha", p.alpha},
                {"beta", p.beta},
                {"tool_version", p.tool_version},
                {"input_digest", p.input_digest}}}};
  return doc.dump(1) + "\n";
}

SurfaceFile parse_surface(std::string_view text) {
  const json doc = parse_json(text);
  check_json(doc.is_object() && doc.value("kind", std::string()) == "bspline-surface",
             "not a surface file (kind must be bspline-surface)");
  SurfaceFile f;
  auto& s = f.surface;
  s.knots_u = knots_from(doc.at("knots_u"), "knots_u");
  s.knots_v = knots_from(doc.at("knots_v"), "knots_v");
  check_json(integer(doc.at("degree_u"), "degree_u") == s.knots_u.degree, "degree_u disagrees with knots_u");
  check_json(integer(doc.at("degree_v"), "degree_v") == s.knots_v.degree, "degree_v disagrees with knots_v");
  s.rows = integer(doc.at("rows"), "rows");
  s.cols = integer(doc.at("cols"), "cols");
  s.net = points_from(doc.at("net"), "net");
  s.closed_v = doc.value("closed_v", false);
  try {
    validate(s);
  } catch (const Error& e) {
    fail(ErrorKind::parse, e.what(), "parse");
  }
  if (doc.contains("provenance")) {
    const auto& p = doc["provenance"];
    f.provenance.method = p.value("method", std::string());
    f.provenance.per = p.value("per", 1.0);
    f.provenance.alpha = p.value("alpha", default_stretch_weight);
    f.provenance.beta = p.value("beta", default_bend_weight);
    f.provenance.tool_version = p.value("tool_version", std::string());
    f.provenance.input_digest = p.value("input_digest", std::string());
  }
  return f;
}

bool same_surface(const BSplineSurfaced& a, const BSplineSurfaced& b) {
  return a.knots_u == b.knots_u && a.knots_v == b.knots_v && a.rows == b.rows && a.cols == b.cols && a.closed_v == b.closed_v &&
         a.net.rows() == b.net.rows() && a.net == b.net;
}

std::string serialize_curve(const CurveFile& file) {
  json doc = {{"version", 1},
              {"kind", "bspline-curve"},
              {"curve", curve_json(file.curve)},
              {"knot_method", file.knot_method},
              {"params", file.params.values},
              {"shifted_params", file.params.shifted},
              {"domain_knots", file.domain.values},
              {"max_residual", file.max_residual},
              {"condition_satisfied", file.condition_satisfied},
              {"sigma_ratio", file.sigma_ratio}};
  if (file.clamped) doc["clamped"] = curve_json(*file.clamped);
  return doc.dump(1) + "\n";
}

CurveFile parse_curve(std::string_view text) {
  const json doc = parse_json(text);
  check_json(doc.is_object() && doc.value("kind", std::string()) == "bspline-curve",
             "not a curve file (kind must be bspline-curve)");
  CurveFile f;
  f.curve = curve_from(doc.at("curve"), "curve");
  f.knot_method = doc.value("knot_method", std::string());
  for (const auto& v : doc.value("params", json::array())) f.params.values.push_back(number(v, "params"));
  f.params.closed = f.curve.closed();
  f.params.shifted = doc.value("shifted_params", false);
  for (const auto& v : doc.value("domain_knots", json::array())) f.domain.values.push_back(number(v, "domain_knots"));
  f.max_residual = doc.value("max_residual", 0.0);
  f.condition_satisfied = doc.value("condition_satisfied", true);
  f.sigma_ratio = doc.value("sigma_ratio", 0.0);
  if (doc.contains("clamped")) f.clamped = curve_from(doc["clamped"], "clamped");
  return f;
}

KnotVectord parse_knot_vector(std::string_view text, int degree) {
  const auto first = text.find_first_not_of(" \t\r\n");
  KnotVectord kv;
  kv.degree = degree;
  if (first != std::string_view::npos && (text[first] == '{' || text[first] == '[')) {
    const json doc = parse_json(text);
    if (doc.is_object()) {
      kv = knots_from(doc, "knot vector");
      if (kv.degree != degree) fail(ErrorKind::invalid_input, "knot vector degree differs from --degree", "parse");
      return kv;
    }
    for (const auto& v : doc) kv.knots.push_back(number(v, "knot"));
  } else {
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) fail(ErrorKind::parse, "'" + tok + "' is not a knot value", "parse");
      kv.knots.push_back(v);
    }
  }
  try {
    validate(kv);
  } catch (const Error& e) {
    fail(ErrorKind::parse, std::string("knot vector: ") + e.what(), "parse");
  }
  return kv;
}

QuadMesh tessellate(const BSplineSurfaced& surface, Index samples_u, Index samples_v) {
  if (samples_u < 2 || samples_v < 2) fail(ErrorKind::invalid_input, "need at least 2 samples in each direction");
  validate(surface);
  const bool closed = surface.periodic_v();
  const double u0 = surface.knots_u.domain_begin(), u1 = surface.knots_u.domain_end();
  const double v0 = surface.knots_v.domain_begin(), v1 = surface.knots_v.domain_end();
  QuadMesh mesh;
  mesh.vertices.resize(samples_u * samples_v, 3);
  for (Index i = 0; i < samples_u; ++i) {
    const double u = i == samples_u - 1 ? u1 : u0 + (u1 - u0) * static_cast<double>(i) / (samples_u - 1);
    for (Index j = 0; j < samples_v; ++j) {
      const double f = closed ? static_cast<double>(j) / samples_v : static_cast<double>(j) / (samples_v - 1);
      const double v = !closed && j == samples_v - 1 ? v1 : v0 + (v1 - v0) * f;
      mesh.vertices.row(i * samples_v + j) = eval_surface(surface, u, v).transpose();
    }
  }
  const Index face_cols = closed ? samples_v : samples_v - 1;
  for (Index i = 0; i + 1 < samples_u; ++i) {
    for (Index j = 0; j < face_cols; ++j) {
      const Index jn = (j + 1) % samples_v;
      mesh.faces.push_back({i * samples_v + j, i * samples_v + jn, (i + 1) * samples_v + jn, (i + 1) * samples_v + j});
    }
  }
  return mesh;
}

std::string mesh_to_obj(const QuadMesh& mesh) {
  std::string out = "# ";
  out += tool_name;
  out += " surface mesh\n";
  char buf[96];
  for (Index i = 0; i < mesh.vertices.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", mesh.vertices(i, 0), mesh.vertices(i, 1),
                  mesh.vertices(i, 2));
    out += buf;
  }
  for (const auto& f : mesh.faces) {
    std::snprintf(buf, sizeof buf, "f %td %td %td %td\n", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
    out += buf;
  }
  return out;
}

std::string export_obj(const BSplineSurfaced& surface, Index samples_u, Index samples_v) {
  return mesh_to_obj(tessellate(surface, samples_u, samples_v));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string digest_string(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_input, "cannot open " + path, "read");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_input, "cannot write " + path, "write");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::invalid_input, "write failed for " + path, "write");
}

}  // namespace closedloft
