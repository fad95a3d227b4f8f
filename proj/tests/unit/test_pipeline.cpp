#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "logmap/config.hpp"
#include "logmap/errors.hpp"
#include "logmap/pipeline.hpp"
#include "test_util.hpp"

using namespace logmap;

namespace {

SweepConfig small_config(std::string grid) {
  SweepConfig c = parse_config_text("profile = desk\nn-steps = 100000\nm-members = 2000\n");
  apply_setting(c, "mu-grid", grid);
  return c;
}

std::string sweep_csv(const SweepConfig& c) {
  std::ostringstream out;
  write_sweep_csv(out, run_sweep(c).rows, run_metadata(c));
  return out.str();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("mu grid parsing") {
  const std::vector<double> grid = parse_mu_grid("0.05:4:0.05");
  REQUIRE(grid.size() == 80);
  CHECK(grid.front() == 0.05);
  CHECK(grid.back() == 4.0);
  CHECK(std::count(grid.begin(), grid.end(), 1.0) == 1);
  CHECK(std::count(grid.begin(), grid.end(), 3.95) == 1);

  CHECK(parse_mu_grid("0.05:4:0.05,3.95,4") == grid);
  CHECK(parse_mu_grid("3.8, 3.7,3.75") == std::vector<double>{3.7, 3.75, 3.8});

  CHECK_THROWS_AS(parse_mu_grid("0:1:0.5"), ConfigError);
  CHECK_THROWS_AS(parse_mu_grid("1:2"), ConfigError);
  CHECK_THROWS_AS(parse_mu_grid("abc"), ConfigError);
}

TEST_CASE("configuration parsing") {
  SUBCASE("empty config gives full-scale defaults") {
    const SweepConfig c = parse_config_text("");
    CHECK(c.n_steps == 1000000);
    CHECK(c.w_bins == 10000);
    CHECK(c.m_members == 100000);
    CHECK(c.n_max_temperature == 1000);
    CHECK(c.mu_grid.size() == 80);
    CHECK_NOTHROW(validate(c));
  }
  SUBCASE("profile applies before explicit keys, wherever it appears") {
    const SweepConfig c = parse_config_text("w-bins = 250\n# comment\nprofile = desk\n");
    CHECK(c.w_bins == 250);
    CHECK(c.m_members == 10000);
    CHECK(c.profile == "desk");
  }
  SUBCASE("underscores and scientific counts are accepted") {
    const SweepConfig c = parse_config_text("n_steps = 2e6\nseed=42");
    CHECK(c.n_steps == 2000000);
    CHECK(c.seed == 42);
  }
  SUBCASE("errors name the field") {
    try {
      parse_config_text("mu-grid = 1,4.5");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field() == "mu-grid");
      CHECK(std::string(e.what()).find("4.5") != std::string::npos);
    }
    try {
      parse_config_text("w-bins = many");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field() == "w-bins");
    }
    CHECK_THROWS_AS(parse_config_text("colour = blue"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("no equals sign"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("profile = huge"), ConfigError);
  }
  SUBCASE("validation") {
    SweepConfig c = default_config();
    c.mu = 5.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = default_config();
    c.n_max_temperature = 50;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = default_config();
    c.evolve_init = "single_bin:20000";
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = default_config();
    c.n_steps = 1000;
    testing::WarningCapture warnings;
    CHECK_NOTHROW(validate(c));
    CHECK(warnings.messages.size() == 1);
  }
  SUBCASE("echo round-trips through the parser") {
    SweepConfig c = parse_config_text("profile = desk\nseed = 99\nmu-grid = 3.5,4\nevolve-init = point:0.3");
    const SweepConfig back = parse_config_text(echo_config(c));
    CHECK(echo_config(back) == echo_config(c));
    CHECK(echo_config(c, false).find("workers") == std::string::npos);
  }
  SUBCASE("init specs") {
    CHECK(std::holds_alternative<init::Uniform>(parse_init_spec("uniform", 100)));
    CHECK(std::get<init::SingleBin>(parse_init_spec("single_bin:7", 100)).bin == 7);
    CHECK(std::get<init::Point>(parse_init_spec("point:0.25", 100)).x0 == 0.25);
    CHECK_THROWS(parse_init_spec("gaussian", 100));
  }
  SUBCASE("config files") {
    const auto path = std::filesystem::temp_directory_path() / "logmap_test_config.txt";
    std::ofstream(path) << "profile = desk\nseed = 5\n";
    CHECK(load_config_file(path).seed == 5);
    CHECK_THROWS_AS(load_config_file(path.string() + ".missing"), ConfigError);
  }
}

TEST_CASE("run_sweep") {
  SUBCASE("convergent regimes have zero averaged temperature") {
    const SweepResult r = run_sweep(small_config("0.5,2.5"));
    REQUIRE(r.rows.size() == 2);
    for (const SweepRow& row : r.rows) {
      CHECK(row.ok());
      CHECK(row.t_avg < 1e-9);
      CHECK(row.fisher == 8.0);
    }
  }
  SUBCASE("mu=1 reaches the largest possible Fisher information") {
    const SweepResult r = run_sweep(small_config("1"));
    CHECK(r.rows.at(0).fisher == 8.0);
  }
  SUBCASE("rows are sorted, consistent and carry the seed") {
    SweepConfig c = small_config("4,3.2,3.9");
    c.seed = 4242;
    const SweepResult r = run_sweep(c);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].mu == 3.2);
    CHECK(r.rows[2].mu == 4.0);
    for (const SweepRow& row : r.rows) {
      CHECK(row.seed == 4242);
      CHECK(row.cr_complexity == row.fisher * row.variance);
      CHECK(row.t_norm <= 1.0);
    }
    REQUIRE(r.temperature_argmax_mu);
    CHECK(r.rows[0].t_norm == doctest::Approx(r.rows[0].t_avg / std::max({r.rows[0].t_avg, r.rows[1].t_avg, r.rows[2].t_avg})));
    CHECK(r.failures() == 0);
  }
  SUBCASE("a row does not depend on the rest of the grid") {
    const SweepRow alone = run_sweep(small_config("3.9")).rows.at(0);
    const SweepRow with_others = run_sweep(small_config("3.6,3.9")).rows.at(1);
    CHECK(alone.fisher == with_others.fisher);
    CHECK(alone.t_avg == with_others.t_avg);
  }
  SUBCASE("output is identical for any worker count") {
    SweepConfig one = small_config("2.9:4:0.1");
    one.workers = 1;
    SweepConfig many = one;
    many.workers = 4;
    CHECK(sweep_csv(one) == sweep_csv(many));
  }
}

TEST_CASE("run_evolution") {
  SweepConfig c = parse_config_text("profile = desk\nm-members = 10000\nevolve-steps = 60");
  SUBCASE("mu=4 from a single bin") {
    c.evolve_init = "single_bin:50";
    const EvolutionResult r = run_evolution(MapParams(4.0), c);
    REQUIRE(r.points.size() == 61);
    CHECK(r.points.front().fisher == 8.0);
    double late = 0.0;
    for (std::size_t n = 31; n <= 60; ++n) late += r.points[n].temperature;
    CHECK(std::abs(late / 30.0 - 0.25) < 0.01);
  }
  SUBCASE("mu=2 from uniform raises Fisher information") {
    c.evolve_init = "uniform";
    const EvolutionResult r = run_evolution(MapParams(2.0), c);
    CHECK(r.points.back().fisher > r.points.front().fisher);
    CHECK(r.frieden_violations > 0);
  }
}

TEST_CASE("join_vs_temperature and spearman") {
  std::vector<SweepRow> rows(4);
  rows[0] = {.mu = 4.0, .fisher = 0.5, .cr_complexity = 0.06, .t_avg = 0.25};
  rows[1] = {.mu = 0.5, .fisher = 8.0, .cr_complexity = 0.0, .t_avg = 0.0};
  rows[2] = {.mu = 2.5, .fisher = 8.0, .cr_complexity = 0.0, .t_avg = 0.0};
  rows[3] = {.mu = 3.9, .fisher = 0.4, .t_avg = 0.27, .error = "boom"};

  const auto joined = join_vs_temperature(rows);
  REQUIRE(joined.size() == 3);
  CHECK(joined[0].mu == 0.5);
  CHECK(joined[1].mu == 2.5);
  CHECK(joined[2].mu == 4.0);

  CHECK(join_vs_temperature(std::span(rows).first(1)).size() == 1);

  const std::vector<double> a{1, 2, 3, 4}, b{10, 20, 30, 40}, c{4, 3, 2, 1}, flat{1, 1, 1, 1};
  CHECK(spearman(a, b) == doctest::Approx(1.0));
  CHECK(spearman(a, c) == doctest::Approx(-1.0));
  CHECK(std::isnan(spearman(a, flat)));
  // Ties share their average rank: ranks (1.5, 1.5, 3, 4) against (1, 2, 3, 4).
  CHECK(spearman(std::vector<double>{5, 5, 6, 7}, a) == doctest::Approx(0.9486832980505138));
}

TEST_CASE("CSV outputs") {
  SUBCASE("density columns") {
    std::ostringstream out;
    write_density_csv(out, discretize_analytic_mu4(4), {{"mu", "4"}});
    const std::string s = out.str();
    CHECK(s.rfind("# mu=4\nbin_index,bin_left,bin_right,probability\n0,0,0.25,", 0) == 0);
  }
  SUBCASE("sweep CSV reads back exactly") {
    SweepConfig c = small_config("3.3,4");
    const SweepResult r = run_sweep(c);
    std::vector<SweepRow> rows = r.rows;
    rows.push_back({.mu = 3.99, .seed = 1, .error = "failed, badly"});
    rows.back().fisher = std::nan("");
    std::stringstream io;
    write_sweep_csv(io, rows, run_metadata(c));
    const std::vector<SweepRow> back = read_sweep_csv(io);
    REQUIRE(back.size() == 3);
    CHECK(back[0].fisher == r.rows[0].fisher);
    CHECK(back[1].t_avg == r.rows[1].t_avg);
    CHECK(back[1].n0 == r.rows[1].n0);
    CHECK(back[2].error == "failed; badly");
    CHECK(std::isnan(back[2].fisher));
    CHECK_FALSE(back[2].ok());
  }
  SUBCASE("evolution footer") {
    EvolutionResult r;
    r.points = {{0, 8.0, 0.0, 0.1}, {1, 7.0, 0.1, 0.2}};
    r.frieden_violations = 3;
    std::ostringstream out;
    write_evolution_csv(out, r);
    CHECK(out.str() == "n,fisher,cr_complexity,temperature\n0,8,0,0.1\n1,7,0.1,0.2\n"
                       "# frieden_tol=0.001\n# frieden_violations=3\n");
  }
  SUBCASE("sweep output files") {
    SweepConfig c = small_config("3.5,4");
    const auto dir = std::filesystem::temp_directory_path() / "logmap_sweep_outputs";
    std::filesystem::remove_all(dir);
    const auto files = write_sweep_outputs(run_sweep(c), c, dir);
    CHECK(files.size() == 6);
    for (const auto& f : files) CHECK(std::filesystem::exists(f));
    const std::string q = read_file(dir / "quantifiers.csv");
    CHECK(q.find("mu,fisher,variance,cr_complexity,n_steps,w_bins,seed\n") != std::string::npos);
    const std::string t = read_file(dir / "temperature_series.csv");
    CHECK(t.find("mu,step,temperature\n3.5,0,") != std::string::npos);
    CHECK(read_file(dir / "temperature_summary.csv").find("mu,t_avg,t_norm,n0,m_members,seed\n") !=
          std::string::npos);
    CHECK(read_file(dir / "fisher_vs_temperature.csv").find("# spearman_fisher_vs_t_avg=") !=
          std::string::npos);
    CHECK(read_file(dir / "effective_config.txt").find("profile = desk") != std::string::npos);
  }
}
