#pragma once

// File formats: the vertex input document, JSON reports and the sweep CSV.
//
// Vertex document:
//   { "domain": {"p": 2, "q": 2},
//     "vertices": [ M, M, M ] }      M = array of rows, entry = [re, im]

#include "hsd/extremal.hpp"
#include "hsd/triangle_area.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hsd {

using Json = nlohmann::json;

/// Input document problem; the message names the offending field.
class InputError : public DomainError {
public:
    using DomainError::DomainError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VertexFile {
    Index p = 1;
    Index q = 1;
    Triangle triangle;
};

Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, Index p, Index q, const std::string& field);

VertexFile parse_vertex_file(const Json& doc);
VertexFile read_vertex_file(const std::filesystem::path& path);
Json vertex_file_to_json(const VertexFile& vf);
Json triangle_to_json(const Triangle& t);

Json area_result_to_json(const AreaResult& r);

/// Report for one triangle: input echo, per-method values, pairwise deltas and
/// the margin to the r*pi bound.
Json area_report(const VertexFile& input, std::span<const AreaResult> results,
                 std::optional<std::uint64_t> seed = std::nullopt);

Json search_trace_to_json(const SearchTrace& trace, const EqualityReport& equality);

std::string sweep_csv(std::span<const SweepRow> rows);

/// Shortest round-trip decimal form (17 significant digits at most).
std::string format_double(double x);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace hsd
