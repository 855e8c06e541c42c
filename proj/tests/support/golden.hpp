#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace occo::test {

// One line of golden/cases.txt: `<name> <exit-code> <args...>`. Blank lines
// and lines starting with '#' are ignored. Expected stdout lives in
// golden/<name>.out.
struct GoldenCase {
  std::string name;
  int exit_code = 0;
  std::vector<std::string> args;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<GoldenCase> load_golden_cases(const std::string& test_dir) {
  std::vector<GoldenCase> out;
  std::istringstream lines(slurp(test_dir + "/golden/cases.txt"));
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream words(line);
    GoldenCase c;
    words >> c.name >> c.exit_code;
    for (std::string w; words >> w;) c.args.push_back(w);
    out.push_back(std::move(c));
  }
  return out;
}

inline std::string read_golden(const std::string& test_dir, const std::string& name) {
  return slurp(test_dir + "/golden/" + name + ".out");
}

}  // namespace occo::test
