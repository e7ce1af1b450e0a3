#include "qlearndyn/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qlearndyn::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

}  // namespace

Csv read_csv(std::istream& in) {
  Csv csv;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  csv.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != csv.header.size()) throw std::invalid_argument("CSV row width does not match header");
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

void write_csv(std::ostream& out, const Csv& csv) {
  write_row(out, csv.header);
  for (const auto& r : csv.rows) write_row(out, r);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y\n";
  for (const auto& s : traj.samples) {
    out << format_number(s.t) << ',' << format_number(s.point.x) << ',' << format_number(s.point.y) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const EmpiricalTrace& trace) {
  out << "round,x,y\n";
  for (const auto& s : trace.samples) {
    out << s.round << ',' << format_number(s.point.x) << ',' << format_number(s.point.y) << '\n';
  }
}

nlohmann::json trace_metadata(const SimConfig& cfg, const Temperatures& temps, double alpha) {
  return {{"seed", cfg.seed},
          {"alpha", alpha},
          {"batch", cfg.batch},
          {"rounds", cfg.rounds},
          {"record_every", cfg.record_every},
          {"temps", {{"tx", temps.tx}, {"ty", temps.ty}}},
          {"generator", kGeneratorId}};
}

void write_bifurcation_csv(std::ostream& out, const BifurcationDiagram& diagram) {
  out << "T,x,y,stability,branch_id\n";
  for (const auto& br : diagram.branches) {
    for (const auto& s : br.samples) {
      out << format_number(s.temperature) << ',' << format_number(s.rest.point.x) << ','
          << format_number(s.rest.point.y) << ',' << to_string(s.rest.stability) << ',' << br.id << '\n';
    }
  }
}

void write_critical_csv(std::ostream& out, const CriticalCurve& curve) {
  out << "T_fixed,Tc_minus,Tc_plus\n";
  for (const auto& s : curve.samples) {
    out << format_number(s.t_fixed) << ',' << (s.c_minus ? format_number(*s.c_minus) : "") << ','
        << (s.c_plus ? format_number(*s.c_plus) : "") << '\n';
  }
}

nlohmann::json rest_points_json(const std::vector<RestPoint>& rest) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rest) {
    arr.push_back({{"x", r.point.x},
                   {"y", r.point.y},
                   {"u", r.logit.u},
                   {"v", r.logit.v},
                   {"eig",
                    {{r.eigenvalues[0].real(), r.eigenvalues[0].imag()},
                     {r.eigenvalues[1].real(), r.eigenvalues[1].imag()}}},
                   {"stability", to_string(r.stability)},
                   {"residual", r.residual},
                   {"degenerate", r.degenerate}});
  }
  return arr;
}

namespace {

PayoffMatrix parse_matrix(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw std::invalid_argument(std::string("game JSON needs array '") + key + "'");
  const auto& rows = j[key];
  const std::size_t n = rows.size();
  std::vector<double> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) throw std::invalid_argument(std::string("matrix '") + key + "' is not square");
    for (const auto& v : row) {
      if (!v.is_number()) throw std::invalid_argument(std::string("matrix '") + key + "' has a non-numeric entry");
      entries.push_back(v.get<double>());
    }
  }
  return PayoffMatrix(n, std::move(entries));
}

nlohmann::json matrix_json(const PayoffMatrix& m) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Game parse_game(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed game JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("game JSON must be an object");
  const std::string name = j.value("name", std::string("custom"));
  PayoffMatrix a = parse_matrix(j, "A");
  PayoffMatrix b = parse_matrix(j, "B");
  return Game(name, std::move(a), std::move(b));
}

nlohmann::json game_json(const Game& game) {
  return {{"name", game.name}, {"A", matrix_json(game.A)}, {"B", matrix_json(game.B)}};
}

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 40.0;

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  bool log_x;

  double px(double x) const {
    const double f = log_x ? std::log(x / x0) / std::log(x1 / x0) : (x - x0) / (x1 - x0);
    return kMargin + f * kSize;
  }
  double py(double y) const { return kMargin + (1.0 - (y - y0) / (y1 - y0)) * kSize; }
};

void svg_open(std::ostream& out, const std::string& title, const Frame& fr, const char* xlabel, const char* ylabel) {
  const double w = kSize + 2 * kMargin;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << w
      << "\" viewBox=\"0 0 " << w << ' ' << w << "\">\n"
      << "<title>" << xml_escape(title) << "</title>\n"
      << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"" << kMargin / 2 << "\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
      << "</text>\n"
      << "<text x=\"" << w / 2 << "\" y=\"" << w - 8 << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel
      << "</text>\n"
      << "<text x=\"12\" y=\"" << w / 2 << "\" font-size=\"12\">" << ylabel << "</text>\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << kMargin + kSize + 14 << "\" font-size=\"10\">"
      << format_number(fr.x0) << "</text>\n"
      << "<text x=\"" << kMargin + kSize << "\" y=\"" << kMargin + kSize + 14
      << "\" text-anchor=\"end\" font-size=\"10\">" << format_number(fr.x1) << "</text>\n";
}

}  // namespace

std::string portrait_svg(const std::vector<Trajectory>& trajectories, const std::vector<RestPoint>& rest,
                         const std::string& title) {
  std::ostringstream out;
  const Frame fr{0.0, 1.0, 0.0, 1.0, false};
  svg_open(out, title, fr, "x", "y");
  for (const auto& tr : trajectories) {
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
    for (const auto& s : tr.samples) out << fr.px(s.point.x) << ',' << fr.py(s.point.y) << ' ';
    out << "\"/>\n";
  }
  for (const auto& r : rest) {
    const bool stable = r.stability != Stability::kSaddleUnstable;
    out << "<circle cx=\"" << fr.px(r.point.x) << "\" cy=\"" << fr.py(r.point.y) << "\" r=\"5\" stroke=\"black\" fill=\""
        << (stable ? "black" : "white") << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string bifurcation_svg(const BifurcationDiagram& diagram, const std::string& title) {
  std::ostringstream out;
  double t0 = INFINITY, t1 = 0.0;
  for (const auto& br : diagram.branches) {
    for (const auto& s : br.samples) {
      t0 = std::min(t0, s.temperature);
      t1 = std::max(t1, s.temperature);
    }
  }
  if (!(t1 > t0)) {
    t0 = 1.0;
    t1 = 10.0;
  }
  const Frame fr{t0, t1, 0.0, 1.0, true};
  svg_open(out, title, fr, "T", "x");
  for (const auto& br : diagram.branches) {
    const bool stable = !br.samples.empty() && br.samples.front().rest.stability != Stability::kSaddleUnstable;
    out << "<polyline fill=\"none\" stroke=\"" << (stable ? "black" : "crimson") << "\" stroke-width=\"1.5\""
        << (stable ? "" : " stroke-dasharray=\"4 3\"") << " points=\"";
    for (const auto& s : br.samples) out << fr.px(s.temperature) << ',' << fr.py(s.rest.point.x) << ' ';
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace qlearndyn::io
