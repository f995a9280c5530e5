#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace monitor {

/// Gridded scalar field with a land/invalid mask. Row-major storage;
/// grid indices are the coordinate system (x = column, y = row).
struct FieldRaster {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;        // rows*cols, row-major
  std::vector<std::uint8_t> mask;    // nonzero = land/invalid

  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  bool masked(int r, int c) const { return mask[static_cast<std::size_t>(r) * cols + c] != 0; }
  std::size_t cell_count() const { return values.size(); }
  int ocean_count() const;
};

enum class SynthKind { gaussian_blobs, smooth_gradient };
enum class RasterFormat { csv, pgm };

/// Parses a rectangular CSV raster. Blank or non-numeric entries become
/// masked cells; rows of differing width raise FormatError.
FieldRaster load_field_csv(const std::string& path);

/// Deterministic synthetic field, values normalized to [0, 1], no mask.
FieldRaster synth_field(int rows, int cols, std::uint32_t seed, SynthKind kind);

/// Block-mean down-sampling; a target cell is masked iff its source block
/// is fully masked.
FieldRaster downsample(const FieldRaster& f, int rows, int cols);

void write_raster(const FieldRaster& f, const std::string& path, RasterFormat format);

}  // namespace monitor
