#include "fockgen/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fock {

std::string format_sig17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::string complex_pairs(const Eigen::VectorXcd& v, const char* indent) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out += (i == 0) ? "\n" : ",\n";
    out += indent;
    out += "[" + format_sig17(v[i].real()) + ", " + format_sig17(v[i].imag()) +
           "]";
  }
  out += "\n";
  out += std::string(indent).substr(0, std::string(indent).size() - 2) + "]";
  return out;
}

Eigen::VectorXcd complex_pairs_from_json(const Json& arr,
                                         const char* field) {
  if (!arr.is_array())
    throw Error(ErrorCode::ConfigInvalid,
                std::string(field) + " must be an array of [re, im] pairs");
  Eigen::VectorXcd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& pair = arr[i];
    if (!pair.is_array() || pair.size() != 2)
      throw Error(ErrorCode::ConfigInvalid,
                  std::string(field) + "[" + std::to_string(i) +
                      "] is not an [re, im] pair");
    v[Eigen::Index(i)] = std::complex<double>(pair[0].get<double>(),
                                              pair[1].get<double>());
  }
  return v;
}

}  // namespace

std::string state_json(const State& state, const Json& meta) {
  std::string out = "{\n";
  out += "  \"dim\": " + std::to_string(state.dim()) + ",\n";
  out += "  \"amplitudes\": " + complex_pairs(state.amplitudes, "    ") + ",\n";
  out += "  \"meta\": " + meta.dump(2) + "\n";
  out += "}\n";
  return out;
}

State state_from_json(const Json& doc) {
  try {
    State s;
    s.amplitudes = complex_pairs_from_json(doc.at("amplitudes"), "amplitudes");
    if (doc.contains("dim") &&
        doc.at("dim").get<Eigen::Index>() != s.amplitudes.size())
      throw Error(ErrorCode::ConfigInvalid,
                  "dim field disagrees with the amplitude count");
    if (s.dim() == 0)
      throw Error(ErrorCode::ConfigInvalid, "state file has no amplitudes");
    for (Eigen::Index n = 0; n < s.dim(); ++n)
      if (!std::isfinite(s.amplitudes[n].real()) ||
          !std::isfinite(s.amplitudes[n].imag()))
        throw Error(ErrorCode::ConfigInvalid, "non-finite amplitude in file");
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid,
                std::string("malformed state file: ") + e.what());
  }
}

std::string spec_json(const RandomStateSpec& spec) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(spec.n_top) + ",\n";
  out += "  \"theta\": " + format_sig17(spec.theta) + ",\n";
  out += "  \"seed\": " + std::to_string(spec.seed) + ",\n";
  out += "  \"distribution\": \"" + std::string(to_string(spec.law)) + "\"\n";
  out += "}\n";
  return out;
}

RandomStateSpec spec_from_json(const Json& doc) {
  try {
    RandomStateSpec spec;
    spec.n_top = doc.at("n").get<Eigen::Index>();
    spec.theta = doc.value("theta", 0.0);
    spec.seed = doc.value("seed", std::uint64_t(0));
    const std::string law = doc.value("distribution", "uniform-unit");
    if (law != "uniform-unit")
      throw Error(ErrorCode::ConfigInvalid,
                  "unknown distribution \"" + law + "\"");
    spec.law = AmplitudeLaw::UniformUnit;
    return spec;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid,
                std::string("malformed spec file: ") + e.what());
  }
}

std::string recipe_json(const Recipe& recipe, const Json& meta) {
  std::string out = "{\n";
  out += "  \"coeffs\": " + complex_pairs(recipe.coeffs, "    ") + ",\n";
  out += "  \"roots\": " + complex_pairs(recipe.roots, "    ") + ",\n";
  out += "  \"alphas\": " + complex_pairs(recipe.alphas, "    ") + ",\n";
  out += "  \"transmittance\": " + format_sig17(recipe.transmittance) + ",\n";
  out += "  \"success_prob\": " + format_sig17(recipe.success_prob) + ",\n";
  out += "  \"residual\": " + format_sig17(recipe.residual) + ",\n";
  out += "  \"meta\": " + meta.dump(2) + "\n";
  out += "}\n";
  return out;
}

Recipe recipe_from_json(const Json& doc) {
  try {
    Recipe r;
    r.coeffs = complex_pairs_from_json(doc.at("coeffs"), "coeffs");
    r.roots = complex_pairs_from_json(doc.at("roots"), "roots");
    r.alphas = complex_pairs_from_json(doc.at("alphas"), "alphas");
    r.transmittance = doc.at("transmittance").get<double>();
    r.success_prob = doc.at("success_prob").get<double>();
    r.residual = doc.at("residual").get<double>();
    if (r.alphas.size() != r.roots.size() + 1)
      throw Error(ErrorCode::ConfigInvalid,
                  "recipe file needs N+1 alphas for N roots");
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid,
                std::string("malformed recipe file: ") + e.what());
  }
}

std::string report_json(const StatsReport& report, const Json& meta) {
  std::string out = "{\n";
  out += "  \"mean_n\": " + format_sig17(report.mean_n) + ",\n";
  out += "  \"delta_n\": " + format_sig17(report.delta_n) + ",\n";
  out += "  \"mandel_q\": " + format_sig17(report.mandel_q) + ",\n";
  out += "  \"g2\": " + format_sig17(report.g2) + ",\n";
  out += "  \"x1_var\": " + format_sig17(report.x1_var) + ",\n";
  out += "  \"x2_var\": " + format_sig17(report.x2_var) + ",\n";
  out += "  \"entropy\": " + format_sig17(report.entropy) + ",\n";
  out += std::string("  \"squeezed\": ") +
         (report.squeezed ? "true" : "false") + ",\n";
  out += "  \"p\": [";
  for (Eigen::Index n = 0; n < report.p.size(); ++n) {
    out += (n == 0) ? "\n" : ",\n";
    out += "    " + format_sig17(report.p[n]);
  }
  out += "\n  ],\n";
  out += "  \"meta\": " + meta.dump(2) + "\n";
  out += "}\n";
  return out;
}

namespace {

std::string meta_comment(const Json& meta) {
  return "# meta: " + meta.dump() + "\n";
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows, const Json& meta) {
  std::string out = meta_comment(meta);
  out += "n,realization,mean_n,delta_n,mandel_q,g2,x1_var,x2_var,entropy\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.n) + "," + std::to_string(r.realization) + "," +
           format_sig17(r.mean_n) + "," + format_sig17(r.delta_n) + "," +
           format_sig17(r.mandel_q) + "," + format_sig17(r.g2) + "," +
           format_sig17(r.x1_var) + "," + format_sig17(r.x2_var) + "," +
           format_sig17(r.entropy) + "\n";
  }
  return out;
}

std::string husimi_csv(const HusimiGrid& grid, const Json& meta) {
  std::string out = meta_comment(meta);
  out += "re_beta,im_beta,q_value\n";
  const double d_re = (grid.re_max - grid.re_min) / grid.resolution;
  const double d_im = (grid.im_max - grid.im_min) / grid.resolution;
  for (int i = 0; i < grid.resolution; ++i) {
    const double re = grid.re_min + (i + 0.5) * d_re;
    for (int j = 0; j < grid.resolution; ++j) {
      const double im = grid.im_min + (j + 0.5) * d_im;
      out += format_sig17(re) + "," + format_sig17(im) + "," +
             format_sig17(grid.values[Eigen::Index(i) * grid.resolution + j]) +
             "\n";
    }
  }
  return out;
}

std::string fidelity_csv(const std::vector<std::pair<double, double>>& rows,
                         const Json& meta) {
  std::string out = meta_comment(meta);
  out += "eta,fidelity\n";
  for (const auto& [eta, fidelity] : rows)
    out += format_sig17(eta) + "," + format_sig17(fidelity) + "\n";
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path() && !target.parent_path().empty())
    fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::ConfigInvalid,
                  "cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out)
      throw Error(ErrorCode::ConfigInvalid, "short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::ConfigInvalid, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid,
                path + " is not valid JSON: " + e.what());
  }
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream chunks(text);
  std::string chunk;
  while (std::getline(chunks, chunk, ',')) {
    if (chunk.empty()) continue;
    int lo = 0, hi = 0, step = 1;
    const int fields =
        std::sscanf(chunk.c_str(), "%d:%d:%d", &lo, &hi, &step);
    if (fields == 1) {
      values.push_back(lo);
    } else if (fields == 2 || fields == 3) {
      if (step < 1 || hi < lo)
        throw Error(ErrorCode::ConfigInvalid,
                    "bad N range \"" + chunk + "\"");
      for (int n = lo; n <= hi; n += step) values.push_back(n);
    } else {
      throw Error(ErrorCode::ConfigInvalid, "bad N value \"" + chunk + "\"");
    }
  }
  if (values.empty())
    throw Error(ErrorCode::ConfigInvalid, "empty N list \"" + text + "\"");
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

TransmittanceGrid parse_t_grid(const std::string& text) {
  TransmittanceGrid grid;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &grid.lo, &grid.hi,
                  &grid.step) != 3)
    throw Error(ErrorCode::ConfigInvalid,
                "t-grid must be lo:hi:step, got \"" + text + "\"");
  if (!(grid.lo > 0.0) || !(grid.lo < grid.hi) || !(grid.hi < 1.0) ||
      !(grid.step > 0.0))
    throw Error(ErrorCode::ConfigInvalid,
                "t-grid must satisfy 0 < lo < hi < 1 with positive step");
  return grid;
}

HusimiWindow parse_window(const std::string& text) {
  if (text == "auto") return HusimiWindow{};
  HusimiWindow w;
  w.automatic = false;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf:%lf", &w.re_min, &w.re_max,
                  &w.im_min, &w.im_max) != 4)
    throw Error(ErrorCode::ConfigInvalid,
                "window must be auto or re0:re1:im0:im1, got \"" + text +
                    "\"");
  if (!(w.re_max > w.re_min) || !(w.im_max > w.im_min))
    throw Error(ErrorCode::ConfigInvalid, "window is empty");
  return w;
}

}  // namespace fock
