#include "qpair/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace qpair::io {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, "open", "cannot read file");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path, "byte " + std::to_string(e.byte), e.what());
  }
}

Matrix parse_matrix(const json& doc, const std::string& path, const std::string& pointer) {
  const json& m = doc.at(json::json_pointer(pointer));
  if (!m.is_array() || m.empty()) throw ParseError(path, pointer, "expected a non-empty array of rows");
  const std::size_t rows = m.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_ptr = pointer + "/" + std::to_string(i);
    if (!m[i].is_array() || m[i].empty()) throw ParseError(path, row_ptr, "expected a non-empty row");
    if (i == 0) cols = m[i].size();
    if (m[i].size() != cols) {
      throw ParseError(path, row_ptr, "row has " + std::to_string(m[i].size()) + " entries, expected " +
                                          std::to_string(cols));
    }
  }
  Matrix out(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const json& z = m[i][j];
      const std::string ptr = pointer + "/" + std::to_string(i) + "/" + std::to_string(j);
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw ParseError(path, ptr, "expected a complex number [re, im]");
      }
      out(static_cast<Index>(i), static_cast<Index>(j)) = {z[0].get<double>(), z[1].get<double>()};
    }
  }
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

lab::State parse_state(const json& doc, const std::string& path) {
  if (!doc.is_object() || !doc.contains("rho")) throw ParseError(path, "/", "missing key \"rho\"");
  return density_from_matrix<double>(parse_matrix(doc, path, "/rho"));
}

lab::Channel parse_channel(const json& doc, const std::string& path) {
  if (!doc.is_object() || !doc.contains("kraus")) throw ParseError(path, "/", "missing key \"kraus\"");
  const json& list = doc["kraus"];
  if (!list.is_array()) throw ParseError(path, "/kraus", "expected an array of matrices");
  std::vector<Matrix> ops;
  for (std::size_t k = 0; k < list.size(); ++k) {
    ops.push_back(parse_matrix(doc, path, "/kraus/" + std::to_string(k)));
  }
  return channel_from_kraus<double>(std::move(ops));
}

lab::State read_state(const std::string& path) { return parse_state(read_json(path), path); }

lab::Channel read_channel(const std::string& path) { return parse_channel(read_json(path), path); }

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& spec) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::BadParam, "bad number '" + text + "' in channel spec '" + spec + "'");
  }
  return value;
}

}  // namespace

lab::Channel parse_channel_spec(const std::string& spec) {
  std::string body = spec;
  std::vector<Index> dims;
  if (const auto at = body.find('@'); at != std::string::npos) {
    for (const auto& d : split(body.substr(at + 1), 'x')) dims.push_back(parse_number<Index>(d, spec));
    body = body.substr(0, at);
  }
  std::vector<double> params;
  if (const auto colon = body.find(':'); colon != std::string::npos) {
    for (const auto& p : split(body.substr(colon + 1), ',')) params.push_back(parse_number<double>(p, spec));
    body = body.substr(0, colon);
  }
  const auto name = channel_name_from_string(body);
  if (!name) throw Error(ErrorKind::BadParam, "unknown channel '" + body + "'");
  return named_channel<double>(*name, params, dims);
}

lab::Channel load_channel(const std::string& path_or_spec) {
  std::error_code ec;
  if (path_or_spec == "-" || std::filesystem::is_regular_file(path_or_spec, ec)) {
    return read_channel(path_or_spec);
  }
  return parse_channel_spec(path_or_spec);
}

std::string state_document(const Matrix& rho) {
  ordered doc;
  doc["rho"] = matrix_to_json(rho);
  return doc.dump() + "\n";
}

std::string channel_document(const lab::Channel& phi) {
  ordered doc;
  ordered list = ordered::array();
  for (const auto& a : phi.kraus()) list.push_back(ordered(matrix_to_json(a)));
  doc["kraus"] = std::move(list);
  return doc.dump() + "\n";
}

std::string format_exact(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_sig12(double x) {
  if (x == 0) x = 0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  if (std::string_view(buf) == "-0") return "0";
  return buf;
}

namespace {

// JSON number that prints with at most 12 significant digits.
double round12(double x) { return std::strtod(format_sig12(x).c_str(), nullptr); }

std::string dump(const ordered& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string render_info(const InfoReport<double>& r, Format f) {
  if (f == Format::Json) {
    ordered doc;
    doc["h_in"] = round12(r.h_in);
    doc["h_out"] = round12(r.h_out);
    doc["h_exchange"] = round12(r.h_exchange);
    doc["mutual"] = round12(r.mutual);
    doc["coherent"] = round12(r.coherent);
    doc["d_in"] = r.d_in;
    doc["d_out"] = r.d_out;
    doc["n_kraus"] = r.n_kraus;
    if (r.seed) doc["seed"] = *r.seed;
    return dump(doc);
  }
  std::ostringstream out;
  out << "h_in        " << format_sig12(r.h_in) << "\n"
      << "h_out       " << format_sig12(r.h_out) << "\n"
      << "h_exchange  " << format_sig12(r.h_exchange) << "\n"
      << "mutual      " << format_sig12(r.mutual) << "\n"
      << "coherent    " << format_sig12(r.coherent) << "\n"
      << "d_in        " << r.d_in << "\n"
      << "d_out       " << r.d_out << "\n"
      << "n_kraus     " << r.n_kraus << "\n";
  if (r.seed) out << "seed        " << *r.seed << "\n";
  return out.str();
}

std::string render_check(const lab::CheckResult& r, Format f) {
  if (f == Format::Json) {
    ordered doc;
    doc["name"] = r.name;
    doc["kind"] = r.kind == lab::CheckKind::Inequality ? "inequality" : "identity";
    doc["lhs"] = round12(r.lhs);
    doc["rhs"] = round12(r.rhs);
    doc["margin"] = round12(r.margin);
    doc["tolerance"] = r.tolerance;
    doc["passed"] = r.passed;
    if (r.seed) doc["seed"] = *r.seed;
    ordered subs = ordered::array();
    for (const auto& s : r.sub_checks) {
      subs.push_back({{"name", s.name}, {"value", round12(s.value)}, {"tolerance", s.tolerance},
                      {"passed", s.passed}});
    }
    doc["sub_checks"] = std::move(subs);
    return dump(doc);
  }
  std::ostringstream out;
  out << "name       " << r.name << "\n"
      << "lhs        " << format_sig12(r.lhs) << "\n"
      << "rhs        " << format_sig12(r.rhs) << "\n"
      << "margin     " << format_sig12(r.margin) << "\n"
      << "tolerance  " << format_sig12(r.tolerance) << "\n";
  for (const auto& s : r.sub_checks) {
    out << s.name << "  " << format_sig12(s.value) << " (tol " << format_sig12(s.tolerance) << ", "
        << (s.passed ? "ok" : "FAIL") << ")\n";
  }
  out << "passed     " << (r.passed ? "true" : "false") << "\n";
  return out.str();
}

std::string render_campaign(const lab::CampaignReport& r, Format f) {
  if (f == Format::Json) {
    ordered doc;
    doc["seed"] = r.config.seed;
    doc["trials"] = r.config.trials;
    doc["all_passed"] = r.all_passed();
    ordered checks = ordered::array();
    for (const auto& s : r.checks) {
      ordered c;
      c["name"] = std::string(lab::to_string(s.name));
      c["trials"] = s.trials;
      c["passed"] = s.passed;
      c["worst_margin"] = round12(s.worst_margin);
      c["worst_seed"] = s.worst_seed;
      ordered subs = ordered::object();
      for (const auto& [name, value] : s.worst_sub_checks) subs[name] = round12(value);
      c["worst_sub_checks"] = std::move(subs);
      c["failing_seeds"] = s.failing_seeds;
      c["errors"] = s.errors;
      checks.push_back(std::move(c));
    }
    doc["checks"] = std::move(checks);
    return dump(doc);
  }
  std::ostringstream out;
  for (const auto& s : r.checks) {
    out << lab::to_string(s.name) << " trials=" << s.trials << " passed=" << s.passed
        << " worst_margin=" << format_sig12(s.worst_margin) << " worst_seed=" << s.worst_seed;
    for (const auto& [name, value] : s.worst_sub_checks) out << " max_" << name << "=" << format_sig12(value);
    out << " failing=[";
    for (std::size_t i = 0; i < s.failing_seeds.size(); ++i) out << (i ? "," : "") << s.failing_seeds[i];
    out << "]\n";
    for (const auto& e : s.errors) out << "  error " << e << "\n";
  }
  return out.str();
}

}  // namespace qpair::io
