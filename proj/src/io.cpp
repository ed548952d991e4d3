#include "linex/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace linex {

namespace {

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

struct Header {
  long q;
  int n;
  int m;
};

Header parse_header(const std::string& line) {
  Header h{};
  char c1 = 0, c2 = 0;
  std::istringstream in(line);
  if (!(in >> h.q >> c1 >> h.n >> c2 >> h.m) || c1 != ',' || c2 != ',' || h.n < 1 || h.m < 1)
    throw ParseError("bad header line: " + line);
  std::string rest;
  if (in >> rest) throw ParseError("trailing text in header: " + line);
  try {
    (void)Field::get(h.q);
  } catch (const Error& e) {
    throw ParseError(std::string("bad field order in header: ") + e.what());
  }
  return h;
}

std::string header(long q, int n, int m) {
  return std::to_string(q) + "," + std::to_string(n) + "," + std::to_string(m) + "\n";
}

}  // namespace

Family parse_family(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty family file");
  const Header h = parse_header(lines[0]);
  const Field& f = Field::get(h.q);
  std::size_t i = 1;
  Restriction ctx(f, h.n, h.m);
  if (i < lines.size() && lines[i].rfind("context", 0) == 0) {
    ctx = restriction_from_json(f, h.n, h.m, lines[i].substr(7));
    ++i;
  }
  std::vector<Mat> members;
  for (; i < lines.size(); ++i) {
    Mat a = parse_literal(lines[i]);
    if (a.field().q() != h.q || a.rows() != h.n || a.cols() != h.m)
      throw ParseError("member does not match the header: " + lines[i]);
    members.push_back(Mat::from_index(f, h.n, h.m, a.index()));
  }
  return Family(ctx, std::move(members));
}

std::string format_family(const Family& fam) {
  std::string out = header(fam.field().q(), fam.n(), fam.m());
  if (!fam.context().is_empty()) out += "context " + fam.context().to_json() + "\n";
  for (const auto& a : fam.members()) out += a.literal() + "\n";
  return out;
}

DenseFunction parse_function(const std::string& text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty function file");
  const Header h = parse_header(lines[0]);
  const Field& f = Field::get(h.q);
  const std::uint64_t size = upow(h.q, h.n * h.m);
  std::vector<mpq_class> vals;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream in(lines[i]);
    std::string tok;
    while (in >> tok) {
      mpq_class v;
      if (v.set_str(tok, 10) != 0) throw ParseError("bad rational: " + tok);
      if (tok.find('/') != std::string::npos && v.get_den() == 0) throw ParseError("zero denominator: " + tok);
      v.canonicalize();
      vals.push_back(v);
    }
  }
  if (vals.size() != size)
    throw ParseError("expected " + std::to_string(size) + " values, got " + std::to_string(vals.size()));
  return DenseFunction::from_rational(f, h.n, h.m, vals);
}

std::string format_function(const DenseFunction& fn) {
  if (fn.context()) throw DomainError("function files hold full-space functions only");
  std::string out = header(fn.field().q(), fn.n(), fn.m());
  for (const auto& v : fn.rational_values()) out += v.get_str() + "\n";
  return out;
}

Spectrum spectrum_from_json(const Field& f, int n, int m, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("spectrum JSON: ") + e.what());
  }
  if (!j.is_array()) throw ParseError("spectrum JSON must be an array");
  const unsigned p = static_cast<unsigned>(f.p());
  std::vector<Cyclo> coeffs(upow(f.q(), n * m), Cyclo(p));
  for (const auto& e : j) {
    if (!e.contains("X") || !e.contains("re")) throw ParseError("spectrum entry needs X and re");
    const Mat X = parse_literal(e.at("X").get<std::string>());
    if (X.field().q() != f.q() || X.rows() != m || X.cols() != n) throw ParseError("spectrum entry has the wrong shape");
    std::vector<mpq_class> c;
    for (const auto& s : e.at("re")) {
      mpq_class v;
      if (v.set_str(s.get<std::string>(), 10) != 0) throw ParseError("bad coefficient");
      v.canonicalize();
      c.push_back(v);
    }
    if (c.size() + 1 != p) throw ParseError("coefficient vector has the wrong length");
    coeffs[X.index()] = Cyclo::from_coeffs(p, c);
  }
  return Spectrum(f, n, m, std::move(coeffs));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

}  // namespace linex
