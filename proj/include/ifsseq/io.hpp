#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ifsseq/point_set.hpp"
#include "ifsseq/sequences.hpp"

namespace ifsseq::io {

/// Parses an IFS spec document:
///   {"dim": d, "domain": {"lo": [...], "hi": [...]},
///    "maps": [{"A": [row-major d*d numbers], "b": [d numbers]}, ...]}
/// Errors are InputError (or InvalidContraction) naming `source`, the line
/// for syntax errors and the offending field otherwise.
Ifs parse_ifs(const std::string& text, const std::string& source = "<input>");

/// Serializes with shortest round-trip decimals, so `parse_ifs` reproduces
/// every coefficient bit for bit.
std::string format_ifs(const Ifs& s);

Ifs read_ifs_file(const std::filesystem::path& path);
void write_ifs_file(const std::filesystem::path& path, const Ifs& s);

/// A sequence file is either {"terms": [spec, ...]} or a bare array of specs.
IfsSequence parse_sequence(const std::string& text, const std::string& source = "<input>");
IfsSequence read_sequence_file(const std::filesystem::path& path);
std::string format_sequence(const IfsSequence& seq);

/// One point per line, comma-separated coordinates; blank lines and lines
/// starting with '#' are skipped.
PointSet parse_points_csv(const std::string& text, double resolution, const std::string& source = "<input>");
PointSet read_points_csv(const std::filesystem::path& path, double resolution);

/// Coordinates printed with 12 significant digits.
std::string format_points_csv(const PointSet& points);

/// Greyscale or bitmap raster; `value` is row-major from the top row.
struct Raster {
    enum class Kind { Bitmap, Greymap };
    Kind kind = Kind::Bitmap;
    std::size_t width = 0;
    std::size_t height = 0;
    unsigned maxval = 1;
    std::vector<std::uint16_t> value;

    std::uint16_t at(std::size_t row, std::size_t col) const { return value[row * width + col]; }
};

/// Reads PBM (P1/P4) or PGM (P2/P5). Throws InputError on anything else.
Raster parse_raster(const std::string& bytes, const std::string& source = "<input>");
Raster read_raster(const std::filesystem::path& path);

/// Binary PBM (P4) with foreground pixels set.
std::string format_pbm(const Raster& mask);
/// Binary PGM (P5), foreground 255 on background 0.
std::string format_pgm(const Raster& mask);

struct Ingested {
    PointSet points;
    Box domain;
};

/// Foreground pixels to points. Foreground is any nonzero pixel for bitmaps,
/// and value >= threshold (default 128) for greymaps. Pixel (row, col) maps
/// to (col * p, (height - 1 - row) * p) with pitch p = 1 / (max(width, height) - 1);
/// a single-row raster yields one-dimensional points. The domain is
/// [0, (width - 1) p] x [0, (height - 1) p]. Throws InputError when the
/// foreground is empty.
Ingested raster_to_points(const Raster& raster, std::optional<unsigned> threshold = std::nullopt);

/// Inverse of `raster_to_points`: points of a 1-d or 2-d set become
/// foreground pixels of a mask over `domain` sampled at `pitch`.
Raster points_to_raster(const PointSet& points, const Box& domain, double pitch);

/// Writes via a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

} // namespace ifsseq::io
