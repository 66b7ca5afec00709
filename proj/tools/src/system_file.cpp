#include "webgeo_cli/system_file.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "webgeo/errors.hpp"
#include "webgeo/parser.hpp"

namespace webgeo::cli {

namespace {

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

struct Line {
  int number;
  std::string text;
};

std::vector<Line> content_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int no = 0;
  while (std::getline(in, raw)) {
    ++no;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw = raw.substr(0, hash);
    std::string line = strip(raw);
    if (!line.empty()) out.push_back({no, line});
  }
  return out;
}

[[noreturn]] void bad_line(const Line& line, const std::string& why) {
  throw SyntaxError("line " + std::to_string(line.number) + ": " + why +
                        " ('" + line.text + "')",
                    0);
}

}  // namespace

OdeSystem parse_system_text(const std::string& text) {
  std::vector<std::string> vars;
  std::map<int, Expr> rhs;                // 1-based index -> expression
  std::map<std::string, Interval> boxes;  // by variable name

  std::vector<std::string> parse_vars;  // vars + t once known

  for (const Line& line : content_lines(text)) {
    if (line.text.rfind("vars:", 0) == 0) {
      if (!vars.empty()) bad_line(line, "duplicate vars: declaration");
      vars = split_ws(line.text.substr(5));
      if (vars.empty()) bad_line(line, "no variables declared");
      for (const std::string& v : vars) {
        if (v == "t") bad_line(line, "t is reserved for time");
        if (!valid_variable_name(v))
          bad_line(line, "invalid variable name '" + v + "'");
        for (const std::string& w : vars)
          if (&w != &v && w == v)
            bad_line(line, "duplicate variable '" + v + "'");
      }
      parse_vars = vars;
      parse_vars.push_back("t");
      continue;
    }

    if (line.text.rfind("box:", 0) == 0) {
      if (vars.empty()) bad_line(line, "box: before vars:");
      // box: <var> in [a,b]
      std::string body = strip(line.text.substr(4));
      std::size_t in_pos = body.find(" in ");
      if (in_pos == std::string::npos) bad_line(line, "expected '<var> in [a,b]'");
      std::string var = strip(body.substr(0, in_pos));
      std::string range = strip(body.substr(in_pos + 4));
      bool known = false;
      for (const std::string& v : vars) known = known || v == var;
      if (!known) bad_line(line, "box for undeclared variable '" + var + "'");
      double a = 0, b = 0;
      char lb = 0, comma = 0, rb = 0;
      std::istringstream rs(range);
      rs >> lb >> a >> comma >> b >> rb;
      if (rs.fail() || lb != '[' || comma != ',' || rb != ']' || !(a < b))
        bad_line(line, "expected interval '[a,b]' with a < b");
      boxes[var] = Interval{a, b};
      continue;
    }

    // fi = <expr>
    std::size_t eq = line.text.find('=');
    if (eq == std::string::npos) bad_line(line, "expected 'f<i> = <expr>'");
    std::string key = strip(line.text.substr(0, eq));
    std::string body = strip(line.text.substr(eq + 1));
    if (key.size() < 2 || key[0] != 'f') bad_line(line, "unknown key '" + key + "'");
    int idx = 0;
    try {
      idx = std::stoi(key.substr(1));
    } catch (...) {
      bad_line(line, "unknown key '" + key + "'");
    }
    if (vars.empty()) bad_line(line, "right-hand side before vars:");
    if (idx < 1 || idx > static_cast<int>(vars.size()))
      bad_line(line, "f" + std::to_string(idx) + " out of range");
    if (rhs.count(idx)) bad_line(line, "duplicate right-hand side f" + key.substr(1));
    rhs.emplace(idx, parse_expression(body, parse_vars));
  }

  if (vars.empty()) throw SyntaxError("missing vars: declaration", 0);
  for (int i = 1; i <= static_cast<int>(vars.size()); ++i)
    if (!rhs.count(i))
      throw SyntaxError("missing right-hand side f" + std::to_string(i), 0);

  Box box = Box::unit(static_cast<int>(vars.size()));
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (auto it = boxes.find(vars[i]); it != boxes.end()) box.x[i] = it->second;

  std::vector<Expr> f;
  for (int i = 1; i <= static_cast<int>(vars.size()); ++i)
    f.push_back(rhs.at(i));
  return OdeSystem(vars, std::move(f), std::move(box));
}

OdeSystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_text(buf.str());
}

WebMap parse_map_text(const std::string& text, const OdeSystem& src) {
  const int n = src.dimension();
  std::map<int, Expr> components;  // 0 = time

  for (const Line& line : content_lines(text)) {
    std::size_t eq = line.text.find('=');
    if (eq == std::string::npos) bad_line(line, "expected 'phi<i> = <expr>'");
    std::string key = strip(line.text.substr(0, eq));
    std::string body = strip(line.text.substr(eq + 1));
    if (key.rfind("phi", 0) != 0) bad_line(line, "unknown key '" + key + "'");
    int idx = -1;
    try {
      idx = std::stoi(key.substr(3));
    } catch (...) {
      bad_line(line, "unknown key '" + key + "'");
    }
    if (idx < 0 || idx > n) bad_line(line, "phi" + std::to_string(idx) + " out of range");
    if (components.count(idx)) bad_line(line, "duplicate component " + key);
    std::vector<std::string> allowed;
    allowed.push_back(idx == 0 ? "t" : src.variable(idx - 1));
    components.emplace(idx, parse_expression(body, allowed));
  }
  for (int i = 0; i <= n; ++i)
    if (!components.count(i))
      throw SyntaxError("missing component phi" + std::to_string(i), 0);

  std::vector<MapComponent> space;
  for (int i = 1; i <= n; ++i)
    space.push_back(MapComponent::symbolic(components.at(i), src.variable(i - 1)));
  WebMap map(MapComponent::symbolic(components.at(0), "t"), std::move(space));
  map.check_monotone(src.box());
  return map;
}

WebMap load_map_file(const std::string& path, const OdeSystem& src) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_map_text(buf.str(), src);
}

}  // namespace webgeo::cli
