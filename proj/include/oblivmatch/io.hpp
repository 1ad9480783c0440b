#pragma once

#include <stdexcept>
#include <string>

#include "oblivmatch/types.hpp"

namespace oblivmatch {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shortest decimal string that round-trips to the same double.
std::string fmt_double(double x);

/// Instance file schema (JSON):
///   {
///     "n_left": 2, "n_right": 2,
///     "weights": [[2.0, 1.0], [1.0, 2.0]],
///     "realization": {"type": "adversarial", "edges": [[1, 0], [0, 1]]}
///   }
/// or realization {"type": "bernoulli", "probs": [[0.5, ...], ...]}.
/// Reals are written with full round-trip precision.
std::string instance_to_json(const Problem& problem);
Problem parse_instance_json(const std::string& text);

Problem read_instance(const std::string& path);
void write_instance(const std::string& path, const Problem& problem);

}  // namespace oblivmatch
