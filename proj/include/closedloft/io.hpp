#ifndef CLOSEDLOFT_IO_HPP
#define CLOSEDLOFT_IO_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "closedloft/interp.hpp"
#include "closedloft/loft.hpp"

namespace closedloft {

enum class ContourFormat { automatic, json, blocks };

/// Contour rows plus the optional alignment hints of the file.
struct ContourFile {
  int version = 1;
  ContourRows rows;
  std::vector<Index> start;     // empty when absent
  std::vector<bool> reverse;    // empty when absent

  bool has_hints() const { return !start.empty() || !reverse.empty(); }
};

/// JSON: {"version": 1, "rows": [[[x, y, z], ...], ...], "hints": {"start": [...], "reverse": [...]}}.
/// Blocks: one "x y z" per line (commas allowed), a blank line ends a row, '#' starts a comment.
ContourFile parse_contours(std::string_view text, ContourFormat format = ContourFormat::automatic);
ContourFile read_contours(const std::string& path, ContourFormat format = ContourFormat::automatic);

/// Rows with the file's hints applied (start defaults to 0, reverse to false).
ContourRows hinted_rows(const ContourFile& file);

std::string contours_to_json(const ContourFile& file);
std::string contours_to_blocks(const ContourFile& file);

/// Throws invalid_input naming row and point for rows under 3 points,
/// non-finite coordinates, or coincident consecutive points (the wrap pair
/// included).
void validate_rows(const ContourRows& rows);

struct Provenance {
  std::string method;
  double per = 1.0;
  double alpha = default_stretch_weight;
  double beta = default_bend_weight;
  std::string tool_version;
  std::string input_digest;

  bool operator==(const Provenance&) const = default;
};

struct SurfaceFile {
  BSplineSurfaced surface;
  Provenance provenance;
};

std::string serialize_surface(const SurfaceFile& file);
SurfaceFile parse_surface(std::string_view text);

/// Structural equality with bit-exact numbers.
bool same_surface(const BSplineSurfaced& a, const BSplineSurfaced& b);

struct CurveFile {
  BSplineCurved curve;
  std::string knot_method;
  ParameterValues params;
  DomainKnotsd domain;  // empty for open curves
  double max_residual = 0.0;
  bool condition_satisfied = true;
  double sigma_ratio = 0.0;
  std::optional<BSplineCurved> clamped;
};

std::string serialize_curve(const CurveFile& file);
CurveFile parse_curve(std::string_view text);

/// Clamped knot vector from a JSON knot object ({"degree": p, "values": [...]}),
/// a JSON array, or whitespace-separated numbers.
KnotVectord parse_knot_vector(std::string_view text, int degree);

struct QuadMesh {
  Points vertices;
  std::vector<std::array<Index, 4>> faces;  // zero-based
};

/// Uniform parameter lattice. Surfaces periodic in v sample v at j / samples_v and
/// close the last face column onto the first vertex column.
QuadMesh tessellate(const BSplineSurfaced& surface, Index samples_u, Index samples_v);
std::string mesh_to_obj(const QuadMesh& mesh);
std::string export_obj(const BSplineSurfaced& surface, Index samples_u, Index samples_v);

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_string(std::string_view bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

}  // namespace closedloft

#endif  // CLOSEDLOFT_IO_HPP
