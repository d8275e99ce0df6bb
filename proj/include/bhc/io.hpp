#pragma once

// Weight files, penalty flags and the JSON codebook report.
//
// Weight file: one weight per line as an integer, a decimal or "a/b";
// '#' starts a comment; blank lines are ignored.

#include <istream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bhc/codebook.hpp"
#include "bhc/fringe.hpp"
#include "bhc/model.hpp"
#include "bhc/solver.hpp"
#include "json.hpp"

namespace bhc::io {

using Json = nlohmann::ordered_json;

inline std::vector<Rational> parse_weights(std::istream& in) {
  std::vector<Rational> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Rational w;
    try {
      w = parse_rational(line);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (w <= 0)
      throw InvalidArgument("line " + std::to_string(lineno) + ": weight must be positive");
    out.push_back(std::move(w));
  }
  if (out.empty()) throw InvalidArgument("no weights given");
  return out;
}

/// "linear", "quadratic" or "exp:<t>".
inline Penalty parse_penalty(const std::string& text) {
  if (text == "linear") return Penalty::linear();
  if (text == "quadratic") return Penalty::quadratic();
  if (text.rfind("exp:", 0) == 0) return Penalty::exponential(parse_rational(text.substr(4)));
  throw InvalidArgument("unknown penalty '" + text + "' (expected linear, quadratic or exp:<t>)");
}

inline Json penalty_json(const Penalty& p) {
  Json j{{"kind", p.name()}};
  if (p.kind() == PenaltyKind::Exponential) {
    j["t"] = to_fraction_string(p.t());
    j["precision"] = p.precision();
  }
  if (p.kind() == PenaltyKind::CustomTable) {
    Json table = Json::array();
    for (const auto& v : p.table()) table.push_back(to_fraction_string(v));
    j["table"] = table;
  }
  return j;
}

inline Json codewords_json(const Codebook& book) {
  Json arr = Json::array();
  for (const auto& cw : book.codewords) arr.push_back(codeword_to_string(cw, book.radix));
  return arr;
}

/// The codebook report; `verify` reads the same shape back.
inline Json solve_report(const SolveResult& r, const Codebook& book, const Penalty& penalty,
                         LengthBounds bounds) {
  Json j;
  j["radix"] = book.radix.value();
  j["min_len"] = bounds.min;
  j["max_len"] = bounds.max;
  j["lengths"] = r.lengths;
  j["codewords"] = codewords_json(book);
  j["penalty"] = penalty_json(penalty);
  j["penalty_value"] = to_fraction_string(r.penalty_value);
  j["penalty_decimal"] = to_decimal_string(r.penalty_value);
  j["kraft"] = to_fraction_string(r.kraft);
  j["dummies"] = r.dummies;
  return j;
}

inline Json fringe_report(const FringeResult& fr, const Codebook& book, const Penalty& penalty,
                          int max_fringe, std::size_t extra_dummy_blocks) {
  Json j = solve_report(fr.code, book, penalty, fr.bounds);
  j["max_fringe"] = max_fringe;
  j["extra_dummy_blocks"] = extra_dummy_blocks;
  j["chosen_max_len"] = fr.bounds.max;
  j["objective"] = to_fraction_string(fr.objective);
  j["objective_decimal"] = to_decimal_string(fr.objective);
  Json sweep = Json::array();
  for (const auto& e : fr.sweep) {
    Json s{{"max_len", e.bounds.max}, {"min_len", e.bounds.min}, {"feasible", e.feasible}};
    if (e.feasible) s["objective"] = to_fraction_string(e.objective);
    sweep.push_back(s);
  }
  j["sweep"] = sweep;
  return j;
}

struct LoadedCodebook {
  Codebook book;
  std::optional<LengthBounds> bounds;
  std::optional<LengthVector> declared_lengths;
};

inline LoadedCodebook codebook_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("radix") || !j.contains("codewords"))
    throw InvalidArgument("codebook JSON needs \"radix\" and \"codewords\"");
  LoadedCodebook out{Codebook{Radix(j.at("radix").get<int>()), {}}, std::nullopt, std::nullopt};
  // Digit range is checked by verify_codebook, so parse with the widest
  // radix that keeps the same spelling.
  const Radix lenient(out.book.radix.value() <= 36 ? 36 : std::numeric_limits<int>::max());
  for (const auto& cw : j.at("codewords"))
    out.book.codewords.push_back(codeword_from_string(cw.get<std::string>(), lenient));
  if (j.contains("min_len") && j.contains("max_len"))
    out.bounds = LengthBounds(j.at("min_len").get<int>(), j.at("max_len").get<int>());
  if (j.contains("lengths")) out.declared_lengths = j.at("lengths").get<LengthVector>();
  return out;
}

inline Json violations_json(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs)
    arr.push_back(Json{{"kind", v.kind}, {"detail", v.detail}, {"symbols", v.symbols}});
  return arr;
}

}  // namespace bhc::io
