#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "fockgen/io.hpp"
#include "test_util.hpp"

using fock::Json;
using fock::State;
using testutil::Complex;

TEST_CASE("17-digit formatting round-trips doubles exactly") {
  std::mt19937 rng(1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 2.2250738585072014e-308, M_PI,
                   -0.0, 123456789.123456789, gauss(rng), gauss(rng)}) {
    const std::string text = fock::format_sig17(x);
    CHECK(std::stod(text) == x);
  }
}

TEST_CASE("state files round-trip bit-exactly") {
  std::mt19937 rng(5);
  const State s = testutil::random_state(rng, 17, 17);
  const std::string doc = fock::state_json(s, Json{{"note", "test"}});
  const State back = fock::state_from_json(Json::parse(doc));
  REQUIRE(back.dim() == s.dim());
  for (Eigen::Index n = 0; n < s.dim(); ++n)
    CHECK(back.amplitudes[n] == s.amplitudes[n]);
  CHECK(Json::parse(doc)["meta"]["note"] == "test");
}

TEST_CASE("malformed state files are rejected") {
  CHECK_THROWS_AS(fock::state_from_json(Json::parse("{}")), fock::Error);
  CHECK_THROWS_AS(
      fock::state_from_json(Json::parse(R"({"amplitudes": [[0, 1], [2]]})")),
      fock::Error);
  CHECK_THROWS_AS(fock::state_from_json(Json::parse(
                      R"({"dim": 3, "amplitudes": [[1, 0]]})")),
                  fock::Error);
}

TEST_CASE("spec files round-trip including extreme seeds") {
  fock::RandomStateSpec spec;
  spec.n_top = 12;
  spec.theta = -2.75;
  spec.seed = 18446744073709551615ULL;  // 2^64 - 1
  const auto back = fock::spec_from_json(Json::parse(fock::spec_json(spec)));
  CHECK(back.n_top == spec.n_top);
  CHECK(back.theta == spec.theta);
  CHECK(back.seed == spec.seed);
  CHECK(back.law == fock::AmplitudeLaw::UniformUnit);
}

TEST_CASE("recipe files round-trip") {
  fock::Recipe r;
  r.coeffs.resize(3);
  r.coeffs << Complex(0.6, 0), Complex(0, 0.48), Complex(0.64, 0);
  r.roots.resize(2);
  r.roots << Complex(-1.25, 0.5), Complex(0.75, -0.3);
  r.alphas.resize(3);
  r.alphas << Complex(0.1, 0.2), Complex(-0.3, 0), Complex(0.75, -0.3);
  r.transmittance = 0.878;
  r.success_prob = 0.0421;
  r.residual = 3e-14;
  const auto back =
      fock::recipe_from_json(Json::parse(fock::recipe_json(r, Json::object())));
  CHECK(back.coeffs == r.coeffs);
  CHECK(back.roots == r.roots);
  CHECK(back.alphas == r.alphas);
  CHECK(back.transmittance == r.transmittance);
  CHECK(back.success_prob == r.success_prob);
  CHECK(back.residual == r.residual);
}

TEST_CASE("csv tables carry the declared columns") {
  std::vector<fock::SweepRow> rows(2);
  rows[0] = {4, 0, 2.0, 1.1, -0.2, 0.9, 0.5, 0.6, 1.2};
  rows[1] = {4, -1, 2.0, 1.1, -0.2, 0.9, 0.5, 0.6, 1.2};
  const std::string sweep = fock::sweep_csv(rows, Json::object());
  CHECK(sweep.find("n,realization,mean_n,delta_n,mandel_q,g2,x1_var,x2_var,"
                   "entropy\n") != std::string::npos);
  CHECK(sweep.find("4,-1,") != std::string::npos);

  fock::HusimiGrid grid;
  grid.re_min = grid.im_min = -1;
  grid.re_max = grid.im_max = 1;
  grid.resolution = 2;
  grid.values = Eigen::VectorXd::Constant(4, 0.25);
  const std::string husimi = fock::husimi_csv(grid, Json::object());
  CHECK(husimi.find("re_beta,im_beta,q_value\n") != std::string::npos);
  int lines = 0;
  for (char c : husimi) lines += (c == '\n');
  CHECK(lines == 2 + 4);  // meta comment + header + one line per cell

  const std::string fid =
      fock::fidelity_csv({{0.9, 0.95}, {1.0, 1.0}}, Json::object());
  CHECK(fid.find("eta,fidelity\n") != std::string::npos);
  CHECK(fid.find("0.90000000000000002,0.94999999999999996") !=
        std::string::npos);
}

TEST_CASE("atomic writes replace existing files") {
  const std::string path = "io_test_scratch/out.txt";
  fock::atomic_write(path, "first");
  fock::atomic_write(path, "second");
  CHECK(fock::read_file(path) == "second");
  std::filesystem::remove_all("io_test_scratch");
}

TEST_CASE("N-list parsing") {
  CHECK(fock::parse_n_list("5") == std::vector<int>{5});
  CHECK(fock::parse_n_list("2:6") == std::vector<int>{2, 3, 4, 5, 6});
  CHECK(fock::parse_n_list("2:10:4") == std::vector<int>{2, 6, 10});
  CHECK(fock::parse_n_list("7,3,3") == std::vector<int>{3, 7});
  CHECK_THROWS_AS(fock::parse_n_list(""), fock::Error);
  CHECK_THROWS_AS(fock::parse_n_list("abc"), fock::Error);
  CHECK_THROWS_AS(fock::parse_n_list("9:2"), fock::Error);
}

TEST_CASE("t-grid parsing") {
  const auto grid = fock::parse_t_grid("0.5:0.99:0.001");
  CHECK(grid.lo == 0.5);
  CHECK(grid.hi == 0.99);
  CHECK(grid.step == 0.001);
  CHECK_THROWS_AS(fock::parse_t_grid("0.5:0.99"), fock::Error);
  CHECK_THROWS_AS(fock::parse_t_grid("0:0.99:0.01"), fock::Error);
  CHECK_THROWS_AS(fock::parse_t_grid("0.5:1.2:0.01"), fock::Error);
}

TEST_CASE("window parsing") {
  CHECK(fock::parse_window("auto").automatic);
  const auto w = fock::parse_window("-2:2:-1.5:1.5");
  CHECK(!w.automatic);
  CHECK(w.re_min == -2.0);
  CHECK(w.im_max == 1.5);
  CHECK_THROWS_AS(fock::parse_window("1:2"), fock::Error);
  CHECK_THROWS_AS(fock::parse_window("2:1:0:1"), fock::Error);
}
