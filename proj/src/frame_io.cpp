#include "telet/frame_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace telet {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& token, std::size_t line_no) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw FrameFormatError("line " + std::to_string(line_no) + ": malformed number '" + token + "'");
  }
  if (!std::isfinite(v)) {
    throw FrameFormatError("line " + std::to_string(line_no) + ": non-finite entry '" + token + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Value of `key=` in the header, or throws.
std::string header_value(const std::vector<std::string>& words, const std::string& key) {
  for (const auto& w : words) {
    if (w.rfind(key + "=", 0) == 0) return w.substr(key.size() + 1);
  }
  throw FrameFormatError("header is missing '" + key + "='");
}

long parse_dimension(const std::string& text, const std::string& key) {
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || v < 1) throw FrameFormatError("header has invalid " + key + "='" + text + "'");
  return v;
}

}  // namespace

void write_frame(const Frame& frame, std::ostream& out) {
  out << "telet-frame v1 field=" << to_string(frame.field()) << " d=" << frame.dim() << " N=" << frame.size()
      << '\n';
  const bool complex = frame.field() == Field::complex;
  for (Eigen::Index c = 0; c < frame.size(); ++c) {
    for (Eigen::Index r = 0; r < frame.dim(); ++r) {
      if (r > 0) out << ',';
      const Complex z = frame.matrix()(r, c);
      out << format_number(z.real());
      if (complex) out << ':' << format_number(z.imag());
    }
    out << '\n';
  }
}

void write_frame(const Frame& frame, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FrameFormatError("cannot open '" + path.string() + "' for writing");
  write_frame(frame, out);
  if (!out) throw FrameFormatError("write to '" + path.string() + "' failed");
}

Frame read_frame(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  Field field = Field::complex;
  long d = 0;
  long n = 0;
  std::vector<std::vector<Complex>> rows;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!have_header) {
      std::istringstream ss(text);
      std::vector<std::string> words;
      for (std::string w; ss >> w;) words.push_back(w);
      if (words.size() < 2 || words[0] != "telet-frame" || words[1] != "v1") {
        throw FrameFormatError("line " + std::to_string(line_no) + ": expected 'telet-frame v1' header");
      }
      try {
        field = parse_field(header_value(words, "field"));
      } catch (const InvalidInput& e) {
        throw FrameFormatError(e.what());
      }
      d = parse_dimension(header_value(words, "d"), "d");
      n = parse_dimension(header_value(words, "N"), "N");
      if (n < d) throw FrameFormatError("header declares N < d");
      have_header = true;
      continue;
    }

    std::vector<Complex> row;
    std::stringstream ss(text);
    for (std::string token; std::getline(ss, token, ',');) {
      token = trim(token);
      const auto colon = token.find(':');
      if (colon == std::string::npos) {
        row.emplace_back(parse_number(token, line_no), 0.0);
      } else {
        if (field == Field::real) {
          throw FrameFormatError("line " + std::to_string(line_no) + ": real-field file contains a complex entry");
        }
        row.emplace_back(parse_number(trim(token.substr(0, colon)), line_no),
                         parse_number(trim(token.substr(colon + 1)), line_no));
      }
    }
    if (static_cast<long>(row.size()) != d) {
      throw FrameFormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(d) +
                             " entries, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }

  if (!have_header) throw FrameFormatError("missing header");
  if (static_cast<long>(rows.size()) != n) {
    throw FrameFormatError("expected " + std::to_string(n) + " vectors, found " + std::to_string(rows.size()));
  }
  CMatrix x(d, n);
  for (long c = 0; c < n; ++c) {
    for (long r = 0; r < d; ++r) x(r, c) = rows[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
  }
  try {
    return Frame(field, std::move(x));
  } catch (const InvalidInput& e) {
    throw FrameFormatError(e.what());
  }
}

Frame read_frame(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FrameFormatError("cannot open '" + path.string() + "'");
  return read_frame(in);
}

}  // namespace telet
