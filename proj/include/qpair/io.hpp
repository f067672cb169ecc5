#pragma once

// JSON file formats and report rendering for the command-line tool.
//
//   state file    {"rho":   [[[re, im], ...], ...]}
//   channel file  {"kraus": [matrix, ...]}
//
// A matrix is an array of rows, a row an array of complex numbers, a complex
// number a two-element array [re, im]. "-" as a path means standard input.

#include <json.hpp>

#include <stdexcept>
#include <string>

#include "qpair/information.hpp"
#include "qpair/inequality_lab.hpp"

namespace qpair::io {

using Matrix = ComplexMatrix<double>;

/// Malformed document: bad JSON syntax or a schema violation. `location` is
/// a byte offset for syntax errors and a JSON pointer for schema errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, std::string location, const std::string& detail)
      : std::runtime_error(path + ": " + location + ": " + detail),
        path_(std::move(path)),
        location_(std::move(location)) {}

  const std::string& path() const noexcept { return path_; }
  const std::string& location() const noexcept { return location_; }

 private:
  std::string path_;
  std::string location_;
};

enum class Format { Text, Json };

nlohmann::json read_json(const std::string& path);

/// Decodes the matrix at `pointer` inside `doc`. Ragged rows and non-numeric
/// entries are parse errors; squareness is left to validation.
Matrix parse_matrix(const nlohmann::json& doc, const std::string& path, const std::string& pointer);

nlohmann::json matrix_to_json(const Matrix& m);

lab::State parse_state(const nlohmann::json& doc, const std::string& path);
lab::Channel parse_channel(const nlohmann::json& doc, const std::string& path);
lab::State read_state(const std::string& path);
lab::Channel read_channel(const std::string& path);

/// Channel shorthand `name[:p1,p2,...][@d1[x d2]]`, e.g. `depolarizing:0.5`,
/// `identity@3`, `isometry_embed@2x3`. Throws Error(BadParam) when malformed.
lab::Channel parse_channel_spec(const std::string& spec);

/// A readable file path is loaded as a channel file, anything else is parsed
/// as a shorthand spec.
lab::Channel load_channel(const std::string& path_or_spec);

std::string state_document(const Matrix& rho);
std::string channel_document(const lab::Channel& phi);

/// Shortest decimal that parses back to the same double (at most 17
/// significant digits).
std::string format_exact(double x);
/// 12 significant digits, "-0" printed as "0".
std::string format_sig12(double x);

std::string render_info(const InfoReport<double>& r, Format f);
std::string render_check(const lab::CheckResult& r, Format f);
std::string render_campaign(const lab::CampaignReport& r, Format f);

}  // namespace qpair::io
