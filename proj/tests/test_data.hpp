#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fiberwalk/dataset.hpp"

namespace fiberwalk::testing {

inline std::string read_data_file(const std::string& name) {
  const std::string path = std::string(FIBERWALK_DATA_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Dataset heart_disease() { return parse_grid(read_data_file("heart_disease.grid")); }
inline Dataset esophageal_cancer() { return parse_grid(read_data_file("esophageal_cancer.grid")); }

}  // namespace fiberwalk::testing
