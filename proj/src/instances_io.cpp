#include "rhors/instances_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rhors/matrix_market.hpp"

namespace rhors {

namespace fs = std::filesystem;

void save_instance(const ProblemInstance& inst, const std::string& dir) {
  inst.validate();
  fs::create_directories(dir);
  const fs::path base(dir);

  write_matrix_market_file((base / "H.mtx").string(), inst.H);

  {
    std::ofstream out(base / "g.txt");
    if (!out) throw std::runtime_error("save_instance: cannot open " + (base / "g.txt").string());
    char buf[40];
    for (Index i = 0; i < inst.g.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", inst.g[i]);
      out << buf << '\n';
    }
    if (!out) throw std::runtime_error("save_instance: write failed on g.txt");
  }

  nlohmann::json j;
  j["n"] = inst.dim();
  j["density"] = inst.meta.density;
  j["seed"] = inst.meta.seed;
  j["recipe"] = inst.meta.recipe;
  j["regularizer"] = inst.reg->to_json();
  std::ofstream out(base / "instance.json");
  if (!out)
    throw std::runtime_error("save_instance: cannot open " + (base / "instance.json").string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("save_instance: write failed on instance.json");
}

ProblemInstance load_instance(const std::string& dir) {
  const fs::path base(dir);
  const std::string json_path = (base / "instance.json").string();

  std::ifstream jin(json_path);
  if (!jin) throw std::runtime_error("load_instance: cannot open " + json_path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(jin);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(json_path + ": " + e.what());
  }
  for (const char* key : {"n", "density", "seed", "recipe", "regularizer"}) {
    if (!j.contains(key))
      throw std::runtime_error(json_path + ": missing key \"" + key + "\"");
  }
  if (j.size() != 5) throw std::runtime_error(json_path + ": unexpected extra keys");

  ProblemInstance inst;
  Index n = 0;
  try {
    n = j.at("n").get<Index>();
    inst.meta.density = j.at("density").get<double>();
    inst.meta.seed = j.at("seed").get<std::uint64_t>();
    inst.meta.recipe = j.at("recipe").get<std::string>();
    inst.reg = make_regularizer(j.at("regularizer"));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(json_path + ": " + e.what());
  }

  const std::string g_path = (base / "g.txt").string();
  std::ifstream gin(g_path);
  if (!gin) throw std::runtime_error("load_instance: cannot open " + g_path);
  inst.g.resize(n);
  std::string line;
  Index count = 0;
  for (Index lineno = 1; std::getline(gin, line); ++lineno) {
    const char* s = line.c_str();
    char* end = nullptr;
    const double value = std::strtod(s, &end);
    while (end && *end == ' ') ++end;
    if (end == s || !end || *end != '\0')
      throw std::runtime_error(g_path + ":" + std::to_string(lineno) + ": not a number: \"" +
                               line + "\"");
    if (count >= n)
      throw std::runtime_error(g_path + ":" + std::to_string(lineno) +
                               ": more entries than the declared n = " + std::to_string(n));
    inst.g[count++] = value;
  }
  if (count != n)
    throw std::runtime_error(g_path + ": has " + std::to_string(count) +
                             " entries, expected n = " + std::to_string(n));

  inst.H = read_matrix_market_file((base / "H.mtx").string());
  if (inst.H.dim() != n)
    throw std::runtime_error((base / "H.mtx").string() + ": dimension " +
                             std::to_string(inst.H.dim()) + " does not match n = " +
                             std::to_string(n));

  inst.validate();
  return inst;
}

}  // namespace rhors
