#include "sdr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sdr/error.hpp"

namespace sdr::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open for writing: " + path);
  return out;
}

double parse_cell(const std::string& token, const std::string& path,
                  int lineno) {
  double v = 0.0;
  const char* b = token.data();
  const char* e = b + token.size();
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v))
    fail(ErrorCode::InvalidArgument,
         path + ": line " + std::to_string(lineno) +
             ": expected a finite number, got '" + token + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

models::Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open dataset: " + path);

  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::InvalidArgument, path + ": empty file");
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "y" || header.size() < 2)
    fail(ErrorCode::InvalidArgument,
         path + ": line 1: expected header 'y,x1,...,xp'");
  const int p = static_cast<int>(header.size()) - 1;

  std::vector<double> ys;
  std::vector<double> xs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != p + 1)
      fail(ErrorCode::InvalidArgument,
           path + ": line " + std::to_string(lineno) + ": expected " +
               std::to_string(p + 1) + " fields, got " +
               std::to_string(cells.size()));
    ys.push_back(parse_cell(cells[0], path, lineno));
    for (int j = 1; j <= p; ++j) xs.push_back(parse_cell(cells[j], path, lineno));
  }
  const int n = static_cast<int>(ys.size());
  if (n < 2) fail(ErrorCode::InvalidArgument, path + ": needs at least 2 rows");

  models::Dataset data;
  data.X.resize(n, p);
  data.y.resize(n);
  for (int i = 0; i < n; ++i) {
    data.y(i) = ys[i];
    for (int j = 0; j < p; ++j) data.X(i, j) = xs[i * p + j];
  }
  return data;
}

void save_dataset_csv(const models::Dataset& data, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "y";
  for (int j = 1; j <= data.p(); ++j) out << ",x" << j;
  out << "\n";
  for (int i = 0; i < data.n(); ++i) {
    out << format_double(data.y(i));
    for (int j = 0; j < data.p(); ++j)
      out << ',' << format_double(data.X(i, j));
    out << "\n";
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

void write_fit_csv(const sir::SubspaceEstimate& fit, const std::string& path) {
  std::ofstream out = open_out(path);
  const Eigen::MatrixXd& v = fit.basis.mat();
  out << "row";
  for (int j = 1; j <= v.cols(); ++j) out << ",c" << j;
  out << "\neig";
  for (int j = 0; j < v.cols(); ++j)
    out << ',' << format_double(fit.eigenvalues(j));
  out << "\n";
  for (int i = 0; i < v.rows(); ++i) {
    out << (i + 1);
    for (int j = 0; j < v.cols(); ++j) out << ',' << format_double(v(i, j));
    out << "\n";
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

namespace {

void write_table1(const experiments::PresetResult& result, std::ofstream& out) {
  out << "mu,n,H,p,reps,mean_eig1,sd_eig1\n";
  for (const auto& s : result.summaries) {
    out << format_double(s.mu) << ',' << s.n << ',' << s.H << ',' << s.p << ','
        << s.reps << ',' << format_double(s.mean_eigs.at(0)) << ','
        << format_double(s.sd_eigs.at(0)) << "\n";
  }
}

void write_table2(const experiments::PresetResult& result, std::ofstream& out) {
  out << "mu,n,H,p,reps,ratio1_mean,ratio1_sd,ratio2_mean,ratio2_sd\n";
  for (const auto& s : result.summaries) {
    out << format_double(s.mu) << ',' << s.n << ',' << s.H << ',' << s.p << ','
        << s.reps << ',' << format_double(s.mean_eigs.at(0) / s.mu) << ','
        << format_double(s.sd_eigs.at(0) / s.mu) << ','
        << format_double(s.mean_eigs.at(1) / s.mu) << ','
        << format_double(s.sd_eigs.at(1) / s.mu) << "\n";
  }
}

void write_dtsir(const experiments::PresetResult& result, std::ofstream& out) {
  out << "model,p,s,kappa,n,reps,failures,mean_loss,sd_loss,mean_kappa_loss\n";
  for (const auto& s : result.summaries) {
    out << s.model << ',' << s.p << ',' << s.s << ',' << format_double(s.kappa)
        << ',' << s.n << ',' << s.reps << ',' << s.failures << ','
        << format_double(s.mean_loss) << ',' << format_double(s.sd_loss) << ','
        << format_double(s.mean_kappa_loss) << "\n";
  }
}

void write_custom(const experiments::PresetResult& result, std::ofstream& out) {
  std::size_t max_eigs = 0;
  for (const auto& s : result.summaries)
    max_eigs = std::max(max_eigs, s.mean_eigs.size());
  out << "model,mu,p,d,s,H,kappa,n,estimator,reps,failures,mean_loss,sd_loss,"
         "mean_kappa_loss";
  for (std::size_t j = 1; j <= max_eigs; ++j)
    out << ",mean_eig" << j << ",sd_eig" << j;
  out << "\n";
  for (const auto& s : result.summaries) {
    out << s.model << ',' << format_double(s.mu) << ',' << s.p << ',' << s.d
        << ',' << s.s << ',' << s.H << ',' << format_double(s.kappa) << ','
        << s.n << ',' << s.estimator << ',' << s.reps << ',' << s.failures
        << ',' << format_double(s.mean_loss) << ','
        << format_double(s.sd_loss) << ',' << format_double(s.mean_kappa_loss);
    for (std::size_t j = 0; j < max_eigs; ++j) {
      if (j < s.mean_eigs.size())
        out << ',' << format_double(s.mean_eigs[j]) << ','
            << format_double(s.sd_eigs[j]);
      else
        out << ",,";
    }
    out << "\n";
  }
}

}  // namespace

void write_results_csv(const experiments::PresetResult& result,
                       const std::string& path) {
  if (result.summaries.empty())
    fail(ErrorCode::InvalidArgument, "no summaries to write");
  std::ofstream out = open_out(path);
  if (result.preset == "table1") write_table1(result, out);
  else if (result.preset == "table2") write_table2(result, out);
  else if (result.preset == "dtsir_curves") write_dtsir(result, out);
  else write_custom(result, out);
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_svg_lines(const std::vector<SvgSeries>& series,
                     const std::string& x_label, const std::string& y_label,
                     const std::string& path) {
  if (series.empty())
    fail(ErrorCode::InvalidArgument, "no series to plot");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmin <= xmax) || !(ymin <= ymax))
    fail(ErrorCode::InvalidArgument, "series have no points");
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const double W = 640, Hgt = 480, ml = 70, mr = 20, mt = 20, mb = 50;
  auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  auto py = [&](double y) {
    return Hgt - mb - (y - ymin) / (ymax - ymin) * (Hgt - mt - mb);
  };

  std::ofstream out = open_out(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << Hgt << "\" viewBox=\"0 0 " << W << " " << Hgt
      << "\">\n";
  out << "  <rect width=\"" << W << "\" height=\"" << Hgt
      << "\" fill=\"white\"/>\n";
  // axes
  out << "  <line x1=\"" << ml << "\" y1=\"" << (Hgt - mb) << "\" x2=\""
      << (W - mr) << "\" y2=\"" << (Hgt - mb)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << (Hgt - mb)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <text x=\"" << (W / 2) << "\" y=\"" << (Hgt - 12)
      << "\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(x_label)
      << "</text>\n";
  out << "  <text x=\"16\" y=\"" << (Hgt / 2)
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 "
      << (Hgt / 2) << ")\">" << xml_escape(y_label) << "</text>\n";
  // extremes as tick labels
  out << "  <text x=\"" << ml << "\" y=\"" << (Hgt - mb + 16)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(xmin)
      << "</text>\n";
  out << "  <text x=\"" << (W - mr) << "\" y=\"" << (Hgt - mb + 16)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(xmax)
      << "</text>\n";
  out << "  <text x=\"" << (ml - 6) << "\" y=\"" << (Hgt - mb + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ymin)
      << "</text>\n";
  out << "  <text x=\"" << (ml - 6) << "\" y=\"" << (mt + 4)
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(ymax)
      << "</text>\n";

  int color = 0;
  for (const auto& s : series) {
    const char* stroke = kPalette[color % 8];
    out << "  <polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points)
      out << fixed2(px(x)) << ',' << fixed2(py(y)) << ' ';
    out << "\"/>\n";
    out << "  <text x=\"" << (W - mr - 6) << "\" y=\"" << (mt + 16 + 16 * color)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << stroke << "\">"
        << xml_escape(s.label) << "</text>\n";
    ++color;
  }
  out << "</svg>\n";
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

std::vector<std::string> write_dtsir_svgs(
    const experiments::PresetResult& result, const std::string& dir) {
  // model -> p -> kappa curve
  std::map<std::string, std::map<int, SvgSeries>> loss, kloss;
  for (const auto& s : result.summaries) {
    if (s.kappa <= 0.0) continue;
    auto& ls = loss[s.model][s.p];
    auto& ks = kloss[s.model][s.p];
    ls.label = "p=" + std::to_string(s.p);
    ks.label = ls.label;
    ls.points.emplace_back(s.kappa, s.mean_loss);
    ks.points.emplace_back(s.kappa, s.mean_kappa_loss);
  }
  if (loss.empty())
    fail(ErrorCode::InvalidArgument, "no kappa cells to plot");

  std::vector<std::string> written;
  for (const auto& [model, by_p] : loss) {
    std::vector<SvgSeries> series;
    for (const auto& [p, s] : by_p) series.push_back(s);
    const std::string path =
        (std::filesystem::path(dir) / (model + "_loss.svg")).string();
    write_svg_lines(series, "kappa", "mean loss", path);
    written.push_back(path);
  }
  for (const auto& [model, by_p] : kloss) {
    std::vector<SvgSeries> series;
    for (const auto& [p, s] : by_p) series.push_back(s);
    const std::string path =
        (std::filesystem::path(dir) / (model + "_kappa_loss.svg")).string();
    write_svg_lines(series, "kappa", "kappa * mean loss", path);
    written.push_back(path);
  }
  return written;
}

}  // namespace sdr::io
