#include "oblivmatch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace oblivmatch {

using json = nlohmann::ordered_json;

std::string fmt_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

json matrix_to_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json bits_to_rows(const BitMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_to_matrix(const json& rows, Eigen::Index n_rows,
                               Eigen::Index n_cols, const char* what) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n_rows)
    throw IoError(std::string("dimension mismatch in ") + what);
  Eigen::MatrixXd m(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols)
      throw IoError(std::string("dimension mismatch in ") + what);
    for (Eigen::Index j = 0; j < n_cols; ++j) {
      const json& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_number()) throw IoError(std::string("non-numeric entry in ") + what);
      m(i, j) = cell.get<double>();
    }
  }
  return m;
}

}  // namespace

std::string instance_to_json(const Problem& problem) {
  const auto& instance = problem.instance;
  for (Eigen::Index u = 0; u < instance.n_left(); ++u)
    for (Eigen::Index v = 0; v < instance.n_right(); ++v)
      if (!std::isfinite(instance.weights(u, v)))
        throw IoError("cannot serialize non-finite weight");

  json j;
  j["n_left"] = instance.n_left();
  j["n_right"] = instance.n_right();
  j["weights"] = matrix_to_rows(instance.weights);

  json realization;
  if (const auto* adv = std::get_if<AdversarialBits>(&problem.realization)) {
    realization["type"] = "adversarial";
    realization["edges"] = bits_to_rows(adv->present);
  } else if (const auto* bern = std::get_if<BernoulliProbs>(&problem.realization)) {
    realization["type"] = "bernoulli";
    realization["probs"] = matrix_to_rows(bern->probs);
  } else {
    throw IoError("joint-sampler realizations are not serializable");
  }
  j["realization"] = std::move(realization);
  return j.dump(2) + "\n";
}

Problem parse_instance_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed instance file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n_left") || !j.contains("n_right") ||
      !j.contains("weights") || !j.contains("realization"))
    throw IoError("malformed instance file: missing required field");
  if (!j["n_left"].is_number_integer() || !j["n_right"].is_number_integer())
    throw IoError("malformed instance file: vertex counts must be integers");

  const auto n_left = j["n_left"].get<Eigen::Index>();
  const auto n_right = j["n_right"].get<Eigen::Index>();
  if (n_left < 1 || n_right < 1) throw IoError("vertex counts must be >= 1");

  Problem problem;
  problem.instance.weights = rows_to_matrix(j["weights"], n_left, n_right, "weights");

  const json& r = j["realization"];
  if (!r.is_object() || !r.contains("type") || !r["type"].is_string())
    throw IoError("malformed instance file: bad realization");
  const std::string type = r["type"].get<std::string>();
  if (type == "adversarial") {
    if (!r.contains("edges")) throw IoError("malformed instance file: missing edges");
    const Eigen::MatrixXd raw = rows_to_matrix(r["edges"], n_left, n_right, "edges");
    BitMatrix bits(n_left, n_right);
    for (Eigen::Index u = 0; u < n_left; ++u) {
      for (Eigen::Index v = 0; v < n_right; ++v) {
        const double b = raw(u, v);
        if (b != 0.0 && b != 1.0) throw IoError("edge bits must be 0 or 1");
        bits(u, v) = b == 1.0;
      }
    }
    problem.realization = AdversarialBits{std::move(bits)};
  } else if (type == "bernoulli") {
    if (!r.contains("probs")) throw IoError("malformed instance file: missing probs");
    Eigen::MatrixXd probs = rows_to_matrix(r["probs"], n_left, n_right, "probs");
    for (Eigen::Index u = 0; u < n_left; ++u)
      for (Eigen::Index v = 0; v < n_right; ++v)
        if (!(probs(u, v) >= 0.0 && probs(u, v) <= 1.0))
          throw IoError("probability out of range");
    problem.realization = BernoulliProbs{std::move(probs)};
  } else {
    throw IoError("unknown realization type: " + type);
  }
  return problem;
}

Problem read_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance_json(buffer.str());
}

void write_instance(const std::string& path, const Problem& problem) {
  const std::string text = instance_to_json(problem);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace oblivmatch
