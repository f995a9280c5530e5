#include "monitor/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "monitor/errors.hpp"

namespace monitor {

int FieldRaster::ocean_count() const {
  int n = 0;
  for (auto m : mask)
    if (m == 0) ++n;
  return n;
}

namespace {

// Splits a CSV line; a single trailing empty field (line ending in ',')
// is treated as a dangling separator and dropped. The writer compensates
// by emitting an extra ',' when the last cell of a row is masked.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  if (fields.size() > 1 && fields.back().empty()) fields.pop_back();
  return fields;
}

bool parse_double(const std::string& s, double* out) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return false;
  std::size_t b = s.find_last_not_of(" \t");
  const std::string t = s.substr(a, b - a + 1);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v)) return false;
  *out = v;
  return true;
}

}  // namespace

FieldRaster load_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open raster file: " + path);

  FieldRaster f;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() && in.peek() == EOF) break;  // trailing newline
    const auto fields = split_csv_line(line);
    if (row == 0) {
      f.cols = static_cast<int>(fields.size());
    } else if (static_cast<int>(fields.size()) != f.cols) {
      throw FormatError("ragged CSV raster " + path + ": row " + std::to_string(row) +
                        " has " + std::to_string(fields.size()) + " cells, expected " +
                        std::to_string(f.cols));
    }
    for (const auto& s : fields) {
      double v = 0.0;
      if (parse_double(s, &v)) {
        f.values.push_back(v);
        f.mask.push_back(0);
      } else {
        f.values.push_back(0.0);
        f.mask.push_back(1);
      }
    }
    ++row;
  }
  if (row == 0) throw FormatError("empty raster file: " + path);
  f.rows = row;
  return f;
}

namespace {

void normalize_01(FieldRaster* f) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < f->values.size(); ++i) {
    if (f->mask[i]) continue;
    lo = std::min(lo, f->values[i]);
    hi = std::max(hi, f->values[i]);
  }
  const double range = hi - lo;
  for (std::size_t i = 0; i < f->values.size(); ++i) {
    if (f->mask[i]) continue;
    f->values[i] = range > 0 ? (f->values[i] - lo) / range : 0.5;
  }
}

}  // namespace

FieldRaster synth_field(int rows, int cols, std::uint32_t seed, SynthKind kind) {
  if (rows < 2 || cols < 2) throw ContractError("synth_field: dims must be >= 2");
  FieldRaster f;
  f.rows = rows;
  f.cols = cols;
  f.values.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  f.mask.assign(f.values.size(), 0);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double mindim = std::min(rows, cols);

  auto add_bump = [&](double cr, double cc, double sig, double amp) {
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        const double d2 = (r - cr) * (r - cr) + (c - cc) * (c - cc);
        f.values[static_cast<std::size_t>(r) * cols + c] += amp * std::exp(-0.5 * d2 / (sig * sig));
      }
  };

  if (kind == SynthKind::gaussian_blobs) {
    const int nblobs = 3 + static_cast<int>(u01(rng) * 4.0);  // 3..6
    for (int b = 0; b < nblobs; ++b) {
      const double cr = u01(rng) * (rows - 1);
      const double cc = u01(rng) * (cols - 1);
      const double sig = mindim * (0.15 + 0.2 * u01(rng));
      const double amp = (u01(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + u01(rng));
      add_bump(cr, cc, sig, amp);
    }
  } else {
    const double gx = u01(rng) * 2.0 - 1.0;
    const double gy = u01(rng) * 2.0 - 1.0;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        f.values[static_cast<std::size_t>(r) * cols + c] =
            gy * r / (rows - 1.0) + gx * c / (cols - 1.0);
    add_bump(u01(rng) * (rows - 1), u01(rng) * (cols - 1), mindim * 0.25, 1.0 + u01(rng));
  }
  normalize_01(&f);
  return f;
}

FieldRaster downsample(const FieldRaster& f, int rows, int cols) {
  if (rows > f.rows || cols > f.cols || rows < 1 || cols < 1)
    throw ContractError("downsample: target dims must be in [1, source dims]");
  FieldRaster out;
  out.rows = rows;
  out.cols = cols;
  out.values.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  out.mask.assign(out.values.size(), 0);
  for (int R = 0; R < rows; ++R) {
    const int r0 = static_cast<int>(static_cast<std::int64_t>(R) * f.rows / rows);
    const int r1 = static_cast<int>(static_cast<std::int64_t>(R + 1) * f.rows / rows);
    for (int C = 0; C < cols; ++C) {
      const int c0 = static_cast<int>(static_cast<std::int64_t>(C) * f.cols / cols);
      const int c1 = static_cast<int>(static_cast<std::int64_t>(C + 1) * f.cols / cols);
      double sum = 0.0;
      int n = 0;
      for (int r = r0; r < r1; ++r)
        for (int c = c0; c < c1; ++c)
          if (!f.masked(r, c)) {
            sum += f.at(r, c);
            ++n;
          }
      const std::size_t idx = static_cast<std::size_t>(R) * cols + C;
      if (n == 0) {
        out.mask[idx] = 1;
      } else {
        out.values[idx] = sum / n;
      }
    }
  }
  return out;
}

void write_raster(const FieldRaster& f, const std::string& path, RasterFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write raster: " + path);

  if (format == RasterFormat::csv) {
    char buf[64];
    for (int r = 0; r < f.rows; ++r) {
      std::string line;
      for (int c = 0; c < f.cols; ++c) {
        if (c) line += ',';
        if (!f.masked(r, c)) {
          std::snprintf(buf, sizeof(buf), "%.17g", f.at(r, c));
          line += buf;
        }
      }
      // Masked final cell: extra separator so the reader keeps the empty field.
      if (f.cols > 0 && f.masked(r, f.cols - 1)) line += ',';
      out << line << '\n';
    }
  } else {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      if (!f.mask[i]) {
        lo = std::min(lo, f.values[i]);
        hi = std::max(hi, f.values[i]);
      }
    const double range = hi - lo;
    out << "P5\n" << f.cols << " " << f.rows << "\n255\n";
    std::vector<unsigned char> px(f.cell_count(), 0);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      if (f.mask[i]) continue;
      px[i] = range > 0
                  ? static_cast<unsigned char>(std::lround(255.0 * (f.values[i] - lo) / range))
                  : static_cast<unsigned char>(128);
    }
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace monitor
