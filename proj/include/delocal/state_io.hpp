// JSON state and tactic documents, and the `name:key=value,...` shorthand.
//
// State documents: {"name": ..., "params": {...}} or
// {"dims": [...], "matrix": [[re, im], ...]} (row-major), or
// {"dims": [...], "amplitudes": [[re, im], ...]} for pure states.
// Tactic documents: {"label": ..., "u_a": {"dims", "matrix"}, "v_b": {...}}.
#pragma once

#include <string>

#include "delocal/games.hpp"
#include "delocal/qcore.hpp"

namespace delocal {

/// Thrown for unreadable or unwritable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

State parse_state_json(const std::string& text);
std::string state_to_json(const State& state);

/// `werner:a=0.6`, `bell:phi+` (a bare value sets k), `maximally_mixed`.
State parse_state_shorthand(const std::string& spec);

/// A path to an existing file is read as a state document; anything else is
/// parsed as shorthand.
State load_state(const std::string& spec_or_path);

Tactic parse_tactic_json(const std::string& text);
std::string tactic_to_json(const Tactic& t);
Tactic read_tactic_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// JSON value for a matrix: {"dims": [rows], "matrix": [[re, im], ...]}.
std::string matrix_to_json(const ComplexMatrix& m);

}  // namespace delocal
