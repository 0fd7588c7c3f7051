#include "srtm/io.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace srtm {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j.front().is_array()) {
    throw ModelError("config field '" + name + "' must be a nested array");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ModelError("config field '" + name + "' has ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) {
        throw ModelError("config field '" + name + "' has a non-numeric entry");
      }
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Vector parse_vector(const json& j, const std::string& name) {
  if (!j.is_array()) throw ModelError("config field '" + name + "' must be an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ModelError("config field '" + name + "' has a non-numeric entry");
    }
    v[i] = j[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

void write_double(std::ostream& os, double v) {
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

} // namespace

ModelConfig load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ModelError("model config '" + path + "' is not valid JSON: " + e.what());
  }
  for (const char* field : {"A", "C", "Q", "R", "m0", "P0", "l"}) {
    if (!j.contains(field)) {
      throw ModelError("model config missing field '" + std::string(field) + "'");
    }
  }

  ModelConfig config;
  SrtmModel& model = config.model;
  model.A = parse_matrix(j["A"], "A");
  model.C = parse_matrix(j["C"], "C");
  model.Q = parse_matrix(j["Q"], "Q");
  model.R = parse_matrix(j["R"], "R");
  model.m0 = parse_vector(j["m0"], "m0");
  model.P0 = parse_matrix(j["P0"], "P0");
  if (!j["l"].is_number_integer() || j["l"].get<int>() < 1) {
    throw ModelError("config field 'l' must be a positive integer");
  }
  model.l = j["l"].get<int>();
  model.B = j.contains("B") ? parse_matrix(j["B"], "B")
                            : Matrix::Zero(model.state_dim(), 0);

  if (j.contains("inputs")) {
    const json& ji = j["inputs"];
    if (!ji.is_array() || ji.empty()) {
      throw ModelError("config field 'inputs' must be a non-empty array");
    }
    const int n_intervals = static_cast<int>(ji.size()) - 1;
    config.inputs = InputSequence(n_intervals, model.l, model.input_dim());
    for (int k = 0; k <= n_intervals; ++k) {
      if (!ji[k].is_array() || static_cast<int>(ji[k].size()) != model.l) {
        throw ModelError("config 'inputs' entry " + std::to_string(k) +
                         " must hold l vectors");
      }
      for (int i = 1; i <= model.l; ++i) {
        Vector u = parse_vector(ji[k][i - 1], "inputs");
        if (u.size() != model.input_dim()) {
          throw ModelError("config 'inputs' vector dimension mismatch");
        }
        config.inputs.at(k, i) = std::move(u);
      }
    }
  }
  try {
    model.validate();
  } catch (const ModelError& e) {
    throw ModelError("model config '" + path + "': " + e.what());
  }
  return config;
}

void save_model_config(const std::string& path, const SrtmModel& model,
                       const InputSequence& inputs) {
  json j;
  j["A"] = matrix_to_json(model.A);
  j["B"] = matrix_to_json(model.B);
  j["C"] = matrix_to_json(model.C);
  j["Q"] = matrix_to_json(model.Q);
  j["R"] = matrix_to_json(model.R);
  j["m0"] = vector_to_json(model.m0);
  j["P0"] = matrix_to_json(model.P0);
  j["l"] = model.l;
  if (!inputs.empty()) {
    json all = json::array();
    for (int k = 0; k <= inputs.intervals(); ++k) {
      json interval = json::array();
      for (int i = 1; i <= inputs.samples_per_interval(); ++i) {
        interval.push_back(vector_to_json(inputs.at(k, i)));
      }
      all.push_back(std::move(interval));
    }
    j["inputs"] = std::move(all);
  }
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write model config '" + path + "'");
  out << j.dump(2) << "\n";
}

void save_trajectory_csv(const std::string& path, const Trajectory& traj, int n_x,
                         int n_y, int l) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write trajectory '" + path + "'");
  out << "k,i";
  for (int c = 0; c < n_x; ++c) out << ",x" << c;
  for (int c = 0; c < n_y; ++c) out << ",y" << c;
  out << "\n";

  const int n = traj.intervals(l);
  auto write_row = [&](int k, int i, const Vector& x, const Vector* y) {
    out << k << "," << i;
    for (int c = 0; c < n_x; ++c) {
      out << ",";
      write_double(out, x[c]);
    }
    for (int c = 0; c < n_y; ++c) {
      out << ",";
      if (y) write_double(out, (*y)[c]);
    }
    out << "\n";
  };

  write_row(0, l, traj.states[0], nullptr);
  for (int k = 1; k <= n; ++k) {
    for (int i = 1; i <= l; ++i) {
      const Vector& x = traj.state(k, i, l);
      write_row(k, i, x, i == l ? &traj.measurements[k - 1] : nullptr);
    }
  }
}

Trajectory load_trajectory_csv(const std::string& path, int l) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open trajectory '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ModelError("trajectory '" + path + "' is empty");
  const std::vector<std::string> header = split_csv_line(line);
  int n_x = 0;
  int n_y = 0;
  for (const std::string& name : header) {
    if (name.rfind('x', 0) == 0) ++n_x;
    if (name.rfind('y', 0) == 0) ++n_y;
  }
  if (header.size() < 3 || header[0] != "k" || header[1] != "i" || n_x == 0) {
    throw ModelError("trajectory '" + path + "' has an unexpected header");
  }

  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ModelError("trajectory '" + path + "' has a malformed row");
    }
    Vector x(n_x);
    for (int c = 0; c < n_x; ++c) x[c] = std::stod(cells[2 + c]);
    traj.states.push_back(std::move(x));
    if (n_y > 0 && !cells[2 + n_x].empty()) {
      Vector y(n_y);
      for (int c = 0; c < n_y; ++c) y[c] = std::stod(cells[2 + n_x + c]);
      traj.measurements.push_back(std::move(y));
    }
  }
  if (traj.states.empty() ||
      (static_cast<int>(traj.states.size()) - 1) % l != 0 ||
      traj.intervals(l) != static_cast<int>(traj.measurements.size())) {
    throw ModelError("trajectory '" + path + "' is inconsistent with l=" +
                     std::to_string(l));
  }
  return traj;
}

void save_results_csv(const std::string& path,
                      const std::vector<IntervalPosterior>& intervals, int n_x, int l) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write results '" + path + "'");
  out << "k,i";
  for (int c = 0; c < n_x; ++c) out << ",m" << c;
  for (int c = 0; c < n_x; ++c) out << ",v" << c;
  out << "\n";
  for (std::size_t idx = 0; idx < intervals.size(); ++idx) {
    for (int i = 1; i <= l; ++i) {
      const Vector mean = intervals[idx].mean_block(i, n_x);
      const Matrix cov = intervals[idx].cov_block(i, i, n_x);
      out << (idx + 1) << "," << i;
      for (int c = 0; c < n_x; ++c) {
        out << ",";
        write_double(out, mean[c]);
      }
      for (int c = 0; c < n_x; ++c) {
        out << ",";
        write_double(out, cov(c, c));
      }
      out << "\n";
    }
  }
}

} // namespace srtm
