#include "bziso/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "bziso/errors.hpp"

namespace bziso::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' || line[k] == '\r')) ++k;
    if (k >= line.size()) break;
    const std::size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' && line[k] != '\r') ++k;
    out.push_back({line.substr(start, k - start), start + 1});
  }
  return out;
}

double parse_real(const Token& tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  if (!tok.text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ParseError("expected a real number, got '" + std::string(tok.text) + "'", line,
                     tok.column);
  }
  if (!std::isfinite(v)) throw ParseError("non-finite value", line, tok.column);
  return v;
}

long long parse_integer(const Token& tok, std::size_t line, const char* what) {
  long long v = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ParseError(std::string("expected integer ") + what + ", got '" + std::string(tok.text) +
                         "'",
                     line, tok.column);
  }
  return v;
}

void expect_count(const std::vector<Token>& toks, std::size_t count, std::size_t line,
                  const char* what) {
  if (toks.size() > count) {
    throw ParseError(std::string("unexpected token after ") + what, line, toks[count].column);
  }
  if (toks.size() < count) {
    const std::size_t col = toks.empty() ? 1 : toks.back().column + toks.back().text.size();
    throw ParseError(std::string("incomplete ") + what, line, col);
  }
}

Point3 parse_point(const std::vector<Token>& toks, std::size_t line) {
  expect_count(toks, 3, line, "point (expected 'x y z')");
  return {parse_real(toks[0], line), parse_real(toks[1], line), parse_real(toks[2], line)};
}

void append_point(std::string& out, const Point3& p) {
  out += format_double(p.x);
  out += ' ';
  out += format_double(p.y);
  out += ' ';
  out += format_double(p.z);
  out += '\n';
}

}  // namespace

CurveFile parse_curve_file(std::string_view text) {
  struct Line {
    std::size_t number;
    std::vector<Token> tokens;
  };
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++number;
    auto toks = tokenize(text.substr(pos, end - pos));
    if (!toks.empty() && toks.front().text.front() != '#') lines.push_back({number, std::move(toks)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (lines.empty()) throw ParseError("empty file, expected 'bezier' header", 1, 1);

  CurveFile file;
  std::size_t k = 0;
  {
    const auto& [ln, toks] = lines[k++];
    if (toks[0].text != "bezier") {
      throw ParseError("expected 'bezier' header", ln, toks[0].column);
    }
    expect_count(toks, 4, ln, "header (expected 'bezier <version> <degree> <num_segments>')");
    const auto version = parse_integer(toks[1], ln, "version");
    if (version != kFormatVersion) {
      throw ParseError("unsupported format version " + std::to_string(version), ln,
                       toks[1].column);
    }
    const auto degree = parse_integer(toks[2], ln, "degree");
    if (degree < 1 || degree > 20) {
      throw ParseError("degree must be in [1, 20]", ln, toks[2].column);
    }
    const auto segs = parse_integer(toks[3], ln, "segment count");
    if (segs < 1) throw ParseError("segment count must be positive", ln, toks[3].column);
    file.version = static_cast<int>(version);
    file.degree = static_cast<int>(degree);
    file.segments.resize(static_cast<std::size_t>(segs));
  }

  if (k < lines.size() && lines[k].tokens[0].text == "pipe_radius") {
    const auto& [ln, toks] = lines[k++];
    expect_count(toks, 2, ln, "pipe_radius line");
    const double r = parse_real(toks[1], ln);
    if (!(r > 0.0)) throw ParseError("pipe_radius must be positive", ln, toks[1].column);
    file.pipe_radius = r;
  }

  const auto points_per_segment = static_cast<std::size_t>(file.degree) + 1;
  for (std::size_t s = 0; s < file.segments.size(); ++s) {
    if (k >= lines.size()) {
      throw ParseError("expected 'segment' " + std::to_string(s) + ", got end of file", number, 1);
    }
    const auto& [ln, toks] = lines[k++];
    if (toks[0].text != "segment") throw ParseError("expected 'segment'", ln, toks[0].column);
    expect_count(toks, 1, ln, "'segment'");
    auto& seg = file.segments[s];
    while (k < lines.size() && seg.size() < points_per_segment) {
      const auto& [pln, ptoks] = lines[k];
      if (ptoks[0].text == "segment" || ptoks[0].text == "polyline") break;
      seg.push_back(parse_point(ptoks, pln));
      ++k;
    }
    if (seg.size() != points_per_segment) {
      const std::size_t at = k < lines.size() ? lines[k].number : number;
      throw ParseError("segment " + std::to_string(s) + " has " + std::to_string(seg.size()) +
                           " points, degree " + std::to_string(file.degree) + " needs " +
                           std::to_string(points_per_segment),
                       at, 1);
    }
  }

  if (k < lines.size() && lines[k].tokens[0].text == "polyline") {
    const auto& [ln, toks] = lines[k++];
    expect_count(toks, 2, ln, "polyline header");
    const auto count = parse_integer(toks[1], ln, "vertex count");
    if (count < 1) throw ParseError("polyline count must be positive", ln, toks[1].column);
    std::vector<Point3> poly;
    poly.reserve(static_cast<std::size_t>(count));
    while (k < lines.size() && poly.size() < static_cast<std::size_t>(count)) {
      poly.push_back(parse_point(lines[k].tokens, lines[k].number));
      ++k;
    }
    if (poly.size() != static_cast<std::size_t>(count)) {
      throw ParseError("polyline declares " + std::to_string(count) + " vertices, found " +
                           std::to_string(poly.size()),
                       number, 1);
    }
    file.polyline = std::move(poly);
  }

  if (k < lines.size()) {
    const auto& [ln, toks] = lines[k];
    throw ParseError("unexpected '" + std::string(toks[0].text) + "'", ln, toks[0].column);
  }
  return file;
}

std::string format_curve_file(const CurveFile& file) {
  std::string out = "bezier " + std::to_string(file.version) + ' ' + std::to_string(file.degree) +
                    ' ' + std::to_string(file.segments.size()) + '\n';
  if (file.pipe_radius) out += "pipe_radius " + format_double(*file.pipe_radius) + '\n';
  for (const auto& seg : file.segments) {
    out += "segment\n";
    for (const auto& p : seg) append_point(out, p);
  }
  if (file.polyline) out += format_polyline(*file.polyline);
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

LoadedCurve load_curve_text(std::string_view text) {
  auto file = parse_curve_file(text);
  CompositeBezier curve(file.segments);
  auto diagnostics = validate(curve);
  if (!diagnostics.c1_ok) {
    throw ValidationError("C1", diagnostics.violations.front());
  }
  if (!diagnostics.regular) {
    for (const auto& v : diagnostics.violations) {
      if (v.rfind("regular", 0) == 0) throw ValidationError("regular", v);
    }
    throw ValidationError("regular", "derivative may vanish");
  }
  return {std::move(file), std::move(curve), std::move(diagnostics)};
}

LoadedCurve load_curve(const std::filesystem::path& path) { return load_curve_text(read_text(path)); }

std::string format_polyline(std::span<const Point3> vertices) {
  std::string out = "polyline " + std::to_string(vertices.size()) + '\n';
  for (const auto& p : vertices) append_point(out, p);
  return out;
}

std::string format_mesh(const TriangleMesh& mesh) {
  std::string out;
  for (const auto& v : mesh.vertices) {
    out += "v ";
    append_point(out, v);
  }
  for (const auto& f : mesh.faces) {
    out += "f " + std::to_string(f[0] + 1) + ' ' + std::to_string(f[1] + 1) + ' ' +
           std::to_string(f[2] + 1) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------- reports

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json second_difference_json(const SecondDifference& d) {
  return Json{{"per_coordinate", io::to_json(d.per_coordinate)},
              {"norm", number(d.norm)},
              {"degenerate", d.degenerate}};
}

}  // namespace

Json to_json(const Vec3& v) { return Json::array({number(v.x), number(v.y), number(v.z)}); }

Json to_json(const GeometricConstants& gc) {
  Json j;
  j["degree"] = gc.degree;
  j["M"] = number(gc.M);
  j["sigma"] = number(gc.sigma);
  j["delta2_P"] = second_difference_json(gc.delta2_P);
  j["delta2_Pprime"] = second_difference_json(gc.delta2_Pprime);
  j["pipe_radius"] = gc.pipe_radius ? number(*gc.pipe_radius) : Json(nullptr);
  j["N_inf_n"] = gc.degree >= 1 ? number(n_infinity(gc.degree)) : Json(nullptr);
  j["N_inf_n_minus_1"] = gc.degree >= 2 ? number(n_infinity(gc.degree - 1)) : Json(nullptr);
  return j;
}

Json to_json(const IterationBounds& b) {
  Json j;
  j["N1"] = number(b.N1);
  j["N1_raw"] = number(b.N1_raw);
  j["N1_threshold"] = b.N1_threshold;
  j["derivative_floor"] = number(b.derivative_floor);
  Json table = Json::array();
  for (const auto& [nu, n] : b.N_of_nu) table.push_back(Json{{"nu", number(nu)}, {"N", n}});
  j["N_of_nu"] = std::move(table);
  j["N_prime_r"] = number(b.N_prime_r);
  j["N_prime_half_r"] = number(b.N_prime_half_r);
  j["N2"] = number(b.N2);
  j["simplicity"] = b.simplicity;
  j["simplicity_term"] = b.simplicity_term;
  j["N_hat_real"] = number(b.N_hat_real);
  j["N_hat"] = b.N_hat;
  j["N_hat_term"] = b.N_hat_term;
  j["N_star_real"] = number(b.N_star_real);
  j["N_star"] = b.N_star;
  j["N_star_term"] = b.N_star_term;
  j["remarks"] = Json{{"N2_lt_N1_plus_2", b.remark_n2_ok},
                      {"Nprime_half_r_lt_Nprime_r_plus_1", b.remark_nprime_ok},
                      {"N_star_lt_N_hat_plus_2", b.remark_nstar_ok}};
  return j;
}

Json to_json(const PipeEstimate& p) {
  Json j;
  j["radius"] = number(p.radius);
  j["curvature_bound"] = number(p.curvature_bound);
  j["min_self_distance"] = number(p.min_self_distance);
  j["safety_factor"] = number(p.safety_factor);
  j["sample_density"] = p.sample_density;
  j["window"] = number(p.window);
  j["radius_cap"] = number(p.radius_cap);
  j["critical_pair"] = p.critical_pair
                           ? Json::array({number(p.critical_pair->first),
                                          number(p.critical_pair->second)})
                           : Json(nullptr);
  j["limiting_term"] = p.limiting_term;
  return j;
}

Json to_json(const Diagnostics& d) {
  Json j;
  Json res = Json::array();
  for (double r : d.c1_residuals) res.push_back(number(r));
  j["c1_residuals"] = std::move(res);
  j["c1_tolerance"] = number(d.c1_tolerance);
  j["c1_ok"] = d.c1_ok;
  j["sigma"] = d.sigma ? number(*d.sigma) : Json(nullptr);
  j["regular"] = d.regular;
  j["spot_check_simple"] = d.spot_check_simple;
  j["self_intersection"] = d.self_intersection
                               ? Json::array({number(d.self_intersection->first),
                                              number(d.self_intersection->second)})
                               : Json(nullptr);
  j["violations"] = d.violations;
  return j;
}

Json to_json(const TopologyCertificate& cert) {
  Json j;
  j["level"] = std::string(to_string(cert.level));
  j["verified"] = cert.verified;
  const Check* failed = cert.failed_check();
  j["failed_check"] = failed ? Json(failed->name) : Json(nullptr);
  j["iterations"] = cert.iterations;
  j["verification_iterations"] = cert.verification_iterations;
  j["samples"] = cert.samples;
  Json checks = Json::array();
  for (const auto& c : cert.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"passed", c.passed},
                          {"value", number(c.value)},
                          {"limit", number(c.limit)},
                          {"witness", c.witness}});
  }
  j["checks"] = std::move(checks);
  j["pipe"] = cert.pipe ? to_json(*cert.pipe) : Json(nullptr);
  return j;
}

// ---------------------------------------------------------------- tree text

namespace {

std::string scalar_text(const Json& v) {
  switch (v.type()) {
    case Json::value_t::null:
      return "null";
    case Json::value_t::boolean:
      return v.get<bool>() ? "true" : "false";
    case Json::value_t::number_integer:
      return std::to_string(v.get<std::int64_t>());
    case Json::value_t::number_unsigned:
      return std::to_string(v.get<std::uint64_t>());
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) return number(d).dump();
      auto s = format_double(d);
      if (s.find_first_of(".e") == std::string::npos) s += ".0";
      return s;
    }
    case Json::value_t::string:
      return v.dump();
    case Json::value_t::object:
      return "{}";
    case Json::value_t::array:
      return "[]";
    default:
      throw DomainError("unsupported value in report");
  }
}

bool is_block(const Json& v) { return (v.is_object() || v.is_array()) && !v.empty(); }

void write_block(const Json& v, std::size_t indent, std::string& out) {
  const std::string pad(indent, ' ');
  if (v.is_object()) {
    for (const auto& [key, child] : v.items()) {
      if (key.empty() || key.find_first_of(":\n ") != std::string::npos || key[0] == '-') {
        throw DomainError("report key '" + key + "' is not tree-safe");
      }
      if (is_block(child)) {
        out += pad + key + ":\n";
        write_block(child, indent + 2, out);
      } else {
        out += pad + key + ": " + scalar_text(child) + '\n';
      }
    }
  } else {
    for (const auto& child : v) {
      if (is_block(child)) {
        out += pad + "-:\n";
        write_block(child, indent + 2, out);
      } else {
        out += pad + "- " + scalar_text(child) + '\n';
      }
    }
  }
}

struct TreeLine {
  std::size_t number;
  std::size_t indent;
  std::string_view body;
};

Json parse_scalar(std::string_view s, std::size_t line, std::size_t column) {
  if (s == "null") return nullptr;
  if (s == "true") return true;
  if (s == "false") return false;
  if (s == "{}") return Json::object();
  if (s == "[]") return Json::array();
  if (!s.empty() && s.front() == '"') {
    try {
      return Json::parse(s);
    } catch (const nlohmann::json::exception&) {
      throw ParseError("malformed string", line, column);
    }
  }
  const char* first = s.data();
  const char* last = first + s.size();
  if (s.find_first_of(".eEni") == std::string_view::npos) {
    std::int64_t i = 0;
    const auto res = std::from_chars(first, last, i);
    if (res.ec == std::errc{} && res.ptr == last) return i;
  } else {
    double d = 0.0;
    const auto res = std::from_chars(first, last, d);
    if (res.ec == std::errc{} && res.ptr == last) return d;
  }
  throw ParseError("unrecognised value '" + std::string(s) + "'", line, column);
}

Json parse_block(const std::vector<TreeLine>& lines, std::size_t& k, std::size_t indent) {
  const bool array = lines[k].body.starts_with("-");
  Json out = array ? Json::array() : Json::object();
  while (k < lines.size() && lines[k].indent >= indent) {
    const auto& l = lines[k];
    if (l.indent != indent) throw ParseError("unexpected indentation", l.number, 1);
    const std::size_t col = l.indent + 1;
    if (array) {
      if (l.body == "-:") {
        ++k;
        if (k >= lines.size() || lines[k].indent <= indent) {
          throw ParseError("empty nested item", l.number, col);
        }
        out.push_back(parse_block(lines, k, lines[k].indent));
        continue;
      }
      if (!l.body.starts_with("- ")) throw ParseError("expected list item", l.number, col);
      out.push_back(parse_scalar(l.body.substr(2), l.number, col + 2));
      ++k;
    } else {
      const auto colon = l.body.find(':');
      if (colon == std::string_view::npos || colon == 0) {
        throw ParseError("expected 'key: value'", l.number, col);
      }
      const std::string key(l.body.substr(0, colon));
      if (out.contains(key)) throw ParseError("duplicate key '" + key + "'", l.number, col);
      if (colon + 1 == l.body.size()) {
        ++k;
        if (k >= lines.size() || lines[k].indent <= indent) {
          throw ParseError("missing value for '" + key + "'", l.number, col + colon);
        }
        out[key] = parse_block(lines, k, lines[k].indent);
        continue;
      }
      if (l.body[colon + 1] != ' ') throw ParseError("expected ': '", l.number, col + colon);
      out[key] = parse_scalar(l.body.substr(colon + 2), l.number, col + colon + 2);
      ++k;
    }
  }
  return out;
}

}  // namespace

std::string write_tree(const Json& value) {
  if (!value.is_object() && !value.is_array()) throw DomainError("tree root must be a container");
  std::string out;
  write_block(value, 0, out);
  return out;
}

Json parse_tree(std::string_view text) {
  std::vector<TreeLine> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++number;
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    const std::size_t indent = raw.find_first_not_of(' ');
    if (indent == std::string_view::npos) continue;
    lines.push_back({number, indent, raw.substr(indent)});
  }
  if (lines.empty()) return Json::object();
  if (lines.front().indent != 0) throw ParseError("root must not be indented", lines[0].number, 1);
  std::size_t k = 0;
  return parse_block(lines, k, 0);
}

}  // namespace bziso::io
