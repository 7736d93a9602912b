#include "drknn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace drknn {
namespace {

std::string sample_tag(int index) {
  return "sample " + std::to_string(index);
}

// Splits on commas and runs of whitespace; empty fields between delimiters
// are dropped so "1, 2" and "1,2" and "1 2" parse identically.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char ch : line) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) {
        fields.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) fields.push_back(current);
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(field, &pos);
    return pos == field.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_label(const std::string& field, int& out) {
  // Labels must be integral; "2.0" is accepted, "2.5" is not.
  double value = 0.0;
  if (!parse_double(field, value)) return false;
  double rounded = std::round(value);
  if (std::abs(value - rounded) > 0.0) return false;
  if (rounded < -2147483648.0 || rounded > 2147483647.0) return false;
  out = static_cast<int>(rounded);
  return true;
}

}  // namespace

int Dataset::class_size(int m) const {
  int count = 0;
  for (const auto& s : samples)
    if (s.label == m) ++count;
  return count;
}

std::vector<int> Dataset::class_indices(int m) const {
  std::vector<int> indices;
  for (int i = 0; i < size(); ++i)
    if (samples[i].label == m) indices.push_back(i);
  return indices;
}

Dataset make_dataset(std::vector<LabeledSample> samples, int class_count) {
  if (samples.empty()) throw std::invalid_argument("dataset is empty");
  const auto dim = samples[0].features.size();
  int max_label = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.features.size() != dim) {
      throw std::invalid_argument(sample_tag(static_cast<int>(i)) + ": feature dimension " +
                                  std::to_string(s.features.size()) + " differs from " +
                                  std::to_string(dim));
    }
    if (!s.features.allFinite()) {
      throw std::invalid_argument(sample_tag(static_cast<int>(i)) + ": non-finite feature value");
    }
    if (s.label < 1) {
      throw std::invalid_argument(sample_tag(static_cast<int>(i)) + ": label " +
                                  std::to_string(s.label) + " is not a positive integer");
    }
    max_label = std::max(max_label, s.label);
  }
  if (class_count == 0) class_count = max_label;
  if (max_label > class_count) {
    throw std::invalid_argument("label " + std::to_string(max_label) +
                                " exceeds class_count " + std::to_string(class_count));
  }
  Dataset dataset;
  dataset.samples = std::move(samples);
  dataset.class_count = class_count;
  return dataset;
}

double euclidean_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  return (a - b).norm();
}

CostMatrix euclidean_cost(const Dataset& dataset) {
  const int n = dataset.size();
  const auto dim = dataset.dim();
  for (int i = 0; i < n; ++i) {
    if (dataset.samples[i].features.size() != dim) {
      throw std::invalid_argument(sample_tag(i) + ": feature dimension mismatch");
    }
  }
  CostMatrix cost;
  cost.entries = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = (dataset.samples[i].features - dataset.samples[j].features).norm();
      cost.entries(i, j) = d;
      cost.entries(j, i) = d;
    }
  }
  return cost;
}

void validate_cost(const CostMatrix& cost, double tol) {
  const auto& c = cost.entries;
  if (c.rows() != c.cols()) throw std::invalid_argument("cost matrix is not square");
  for (int i = 0; i < c.rows(); ++i) {
    if (std::abs(c(i, i)) > tol) {
      throw std::invalid_argument("cost diagonal entry " + std::to_string(i) + " is nonzero");
    }
    for (int j = 0; j < c.cols(); ++j) {
      if (!std::isfinite(c(i, j)) || c(i, j) < -tol) {
        throw std::invalid_argument("cost entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is negative or non-finite");
      }
      if (std::abs(c(i, j) - c(j, i)) > tol) {
        throw std::invalid_argument("cost entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is asymmetric");
      }
    }
  }
}

bool satisfies_triangle_inequality(const CostMatrix& cost, double tol) {
  const auto& c = cost.entries;
  const int n = static_cast<int>(c.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (c(i, j) > c(i, k) + c(k, j) + tol) return false;
  return true;
}

Dataset parse_dataset(std::istream& in, const std::string& origin) {
  std::vector<LabeledSample> samples;
  std::string line;
  int line_number = 0;
  bool first_content_row = true;
  Eigen::Index dim = -1;
  while (std::getline(in, line)) {
    ++line_number;
    auto fields = split_fields(line);
    if (fields.empty()) continue;  // blank lines are allowed anywhere
    if (first_content_row) {
      double probe = 0.0;
      if (!parse_double(fields[0], probe)) {
        first_content_row = false;  // header row: skip it
        continue;
      }
    }
    first_content_row = false;
    const std::string where = origin + ":" + std::to_string(line_number);
    if (fields.size() < 2) {
      throw std::invalid_argument(where + ": expected at least one feature and a label, got " +
                                  std::to_string(fields.size()) + " column(s)");
    }
    LabeledSample sample;
    sample.features.resize(static_cast<Eigen::Index>(fields.size()) - 1);
    for (size_t f = 0; f + 1 < fields.size(); ++f) {
      double value = 0.0;
      if (!parse_double(fields[f], value)) {
        throw std::invalid_argument(where + ": column " + std::to_string(f + 1) +
                                    " is not a number: '" + fields[f] + "'");
      }
      if (!std::isfinite(value)) {
        throw std::invalid_argument(where + ": column " + std::to_string(f + 1) +
                                    " is not finite");
      }
      sample.features(static_cast<Eigen::Index>(f)) = value;
    }
    if (!parse_label(fields.back(), sample.label)) {
      throw std::invalid_argument(where + ": label column is not an integer: '" + fields.back() +
                                  "'");
    }
    if (sample.label < 1) {
      throw std::invalid_argument(where + ": label " + std::to_string(sample.label) +
                                  " is not a positive integer");
    }
    if (dim < 0) {
      dim = sample.features.size();
    } else if (sample.features.size() != dim) {
      throw std::invalid_argument(where + ": row has " + std::to_string(sample.features.size()) +
                                  " feature(s), expected " + std::to_string(dim));
    }
    samples.push_back(std::move(sample));
  }
  if (samples.empty()) throw std::invalid_argument(origin + ": no samples found");
  return make_dataset(std::move(samples));
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open dataset file: " + path);
  return parse_dataset(in, path);
}

void save_dataset(const Dataset& dataset, std::ostream& out) {
  char buffer[64];
  for (const auto& s : dataset.samples) {
    for (Eigen::Index f = 0; f < s.features.size(); ++f) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", s.features(f));
      out << buffer << ' ';
    }
    out << s.label << '\n';
  }
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  save_dataset(dataset, out);
}

}  // namespace drknn
