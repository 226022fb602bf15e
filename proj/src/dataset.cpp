#include "aicn/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aicn/rng.hpp"

namespace aicn {

namespace {

double parse_double(std::string_view tok, int line, const char* what) {
  // from_chars takes no leading '+', but labels like "+1" are standard.
  std::string_view body = tok;
  if (!body.empty() && body.front() == '+') {
    body.remove_prefix(1);
    if (body.empty() || body.front() == '+' || body.front() == '-') {
      throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
    }
  }
  double out = 0.0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), out);
  if (res.ec != std::errc() || res.ptr != body.data() + body.size()) {
    throw ParseError(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  }
  if (!std::isfinite(out)) {
    throw ParseError(line, std::string("non-finite ") + what + " '" + std::string(tok) + "'");
  }
  return out;
}

int parse_index(std::string_view tok, int line) {
  int out = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw ParseError(line, "bad feature index '" + std::string(tok) + "'");
  }
  return out;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<int> dim_hint, std::string name) {
  struct Entry {
    int index;
    double value;
  };
  std::vector<std::vector<Entry>> rows;
  std::vector<double> raw_labels;
  // Raw label -> line of first occurrence, for error reporting.
  std::map<double, int> label_lines;

  std::string line_buf;
  int line_no = 0;
  int max_index = 0;
  while (std::getline(in, line_buf)) {
    ++line_no;
    std::string_view line(line_buf);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
      std::size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      if (end > pos) tokens.push_back(line.substr(pos, end - pos));
      pos = end;
    }
    if (tokens.empty()) continue;

    const double label = parse_double(tokens[0], line_no, "label");
    if (label_lines.emplace(label, line_no).second && label_lines.size() > 2) {
      throw ParseError(line_no, "more than two distinct labels (third is " +
                                    std::to_string(label) + ")");
    }
    raw_labels.push_back(label);

    std::vector<Entry> row;
    row.reserve(tokens.size() - 1);
    int prev_index = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "expected idx:value, got '" + std::string(tok) + "'");
      }
      const int idx = parse_index(tok.substr(0, colon), line_no);
      if (idx < 1) throw ParseError(line_no, "feature index must be >= 1");
      if (idx <= prev_index) {
        throw ParseError(line_no, "feature indices must be strictly increasing");
      }
      prev_index = idx;
      max_index = std::max(max_index, idx);
      row.push_back({idx, parse_double(tok.substr(colon + 1), line_no, "feature value")});
    }
    rows.push_back(std::move(row));
  }

  Dataset out;
  out.name = std::move(name);
  const int m = static_cast<int>(rows.size());
  const int d = std::max(max_index, dim_hint.value_or(0));
  out.features = Matrix::Zero(m, d);
  for (int i = 0; i < m; ++i) {
    for (const Entry& e : rows[i]) out.features(i, e.index - 1) = e.value;
  }

  out.labels = Vector(m);
  if (label_lines.size() == 2) {
    // Smaller raw value maps to -1, larger to +1 (covers {-1,+1}, {0,1}, {1,2}, ...).
    const double lo = label_lines.begin()->first;
    for (int i = 0; i < m; ++i) out.labels[i] = raw_labels[i] == lo ? -1.0 : 1.0;
  } else if (label_lines.size() == 1) {
    const double only = label_lines.begin()->first;
    if (only != -1.0 && only != 1.0) {
      throw ParseError(label_lines.begin()->second,
                       "single-class data must already use labels -1/+1, got " +
                           std::to_string(only));
    }
    out.labels.setConstant(only);
  }
  return out;
}

Dataset load_libsvm(const std::string& path, std::optional<int> dim_hint) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file '" + path + "'");
  Dataset data = parse_libsvm(in, dim_hint, path);
  if (in.bad()) throw Error("I/O error while reading '" + path + "'");
  return data;
}

void write_libsvm(const Dataset& data, std::ostream& out) {
  char buf[64];
  for (int i = 0; i < data.rows(); ++i) {
    out << (data.labels[i] > 0 ? "+1" : "-1");
    for (int j = 0; j < data.cols(); ++j) {
      const double v = data.features(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ' ' << (j + 1) << ':' << buf;
    }
    out << '\n';
  }
}

Dataset normalize_rows(Dataset data) {
  for (int i = 0; i < data.rows(); ++i) {
    const double n = data.features.row(i).norm();
    if (n > 0.0) data.features.row(i) /= n;
  }
  data.normalized = true;
  return data;
}

Dataset synth_logistic(int m, int d, std::uint64_t seed) {
  Rng rng(seed);
  const Vector teacher = rng.gaussian_vector(d);
  Dataset out;
  out.features = Matrix(m, d);
  out.labels = Vector(m);
  for (int i = 0; i < m; ++i) {
    Vector a = rng.gaussian_vector(d);
    const double n = a.norm();
    if (n > 0.0) a /= n;
    out.features.row(i) = a.transpose();
    const double margin = a.dot(teacher) + 0.3 * rng.gaussian();
    out.labels[i] = margin >= 0.0 ? 1.0 : -1.0;
  }
  std::ostringstream name;
  name << "synth(m=" << m << ",d=" << d << ",seed=" << seed << ")";
  out.name = name.str();
  out.normalized = true;
  return out;
}

}  // namespace aicn
