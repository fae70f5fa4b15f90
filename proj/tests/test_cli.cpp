#include <doctest.h>

#include <clocale>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include "msv/random.hpp"
#include "msvsim/cli.hpp"
#include "msvsim/config.hpp"
#include "msvsim/csv.hpp"
#include "msvsim/svg.hpp"

namespace fs = std::filesystem;
using namespace msvsim;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(MSV_TEST_TMP) / "cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

SimulationConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

// A configuration small enough to run in well under a second.
const char* const kSmallConfig =
    "harness.n_trials = 4\n"
    "harness.max_epochs = 1500\n"
    "harness.goal = 0.7\n"
    "harness.lr_sweep_from = 0.8\n"
    "harness.lr_sweep_to = 0.9\n"
    "harness.master_seed = 99\n";

// Independent decimal reader used to check the emitter.
double reparse(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  REQUIRE(end == s.c_str() + s.size());
  return v;
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

}  // namespace

TEST_CASE("parse_config: empty file gives the defaults") {
  const SimulationConfig c = parse("");
  CHECK(c.experiment.actor.n_hidden == 10);
  CHECK(c.experiment.critic.n_hidden == 20);
  CHECK(c.experiment.goal == 0.975);
  CHECK(c.experiment.n_trials == 50);
  CHECK(c.experiment.actor.alpha_flip == 0.1);
  CHECK(c.experiment.actor.batch_size == 10);
  CHECK(c.experiment.actor.dw_min == 0.4);
  CHECK(c.experiment.actor.power_exponent == 1.75);
  CHECK(c.experiment.lr_linear == 0.75);
  CHECK(c.experiment.lr_powerlaw == 1.1);
  CHECK(c.experiment.filter_keep == 0.999);
  CHECK(c.experiment.filter_gain == 0.001);
  CHECK(c.device.g_min == 6.4e-7);
  CHECK(c.device.g_max == 8.9e-5);
  CHECK_FALSE(c.tau_explicit);
  CHECK(c.device.pulse_time_constant_tau == doctest::Approx(0.801996280859698).epsilon(1e-12));
}

TEST_CASE("the shipped example config spells out the defaults") {
  const SimulationConfig shipped = load_config(MSV_EXAMPLE_CONFIG);
  const SimulationConfig builtin = default_config();
  const auto& a = shipped.experiment;
  const auto& b = builtin.experiment;
  CHECK(a.actor.lr_hidden == b.actor.lr_hidden);
  CHECK(a.actor.lr_out == b.actor.lr_out);
  CHECK(a.actor.alpha_flip == b.actor.alpha_flip);
  CHECK(a.actor.update_rule == b.actor.update_rule);
  CHECK(a.critic.l1_coeff == b.critic.l1_coeff);
  CHECK(a.lr_sweep.values() == b.lr_sweep.values());
  CHECK(a.master_seed == b.master_seed);
  CHECK(a.presentation == b.presentation);
  CHECK(shipped.device.pulse_time_constant_tau == builtin.device.pulse_time_constant_tau);
  CHECK(shipped.pulse_map.voltages == builtin.pulse_map.voltages);
  CHECK(shipped.pulse_map.durations == builtin.pulse_map.durations);
}

TEST_CASE("parse_config: values, comments and derived defaults") {
  const SimulationConfig c = parse(
      "# comment line\n"
      "actor.alpha_flip = 0.1\n"
      "  actor.lr_hidden=0.8   # trailing comment\n"
      "actor.update_rule = linear\n"
      "env.presentation = cyclic\n"
      "device.pulse_time_constant_tau = 0.5\n"
      "device.map_voltages = -1, 0, 1\n"
      "harness.master_seed = 18446744073709551615\n");
  CHECK(c.experiment.actor.alpha_flip == 0.1);
  CHECK(c.experiment.actor.lr_hidden == 0.8);
  CHECK(c.experiment.actor.lr_out == 0.4);
  CHECK(c.experiment.actor.update_rule == msv::UpdateRule::Linear);
  CHECK(c.experiment.presentation == msv::Presentation::Cyclic);
  CHECK(c.tau_explicit);
  CHECK(c.device.pulse_time_constant_tau == 0.5);
  CHECK(c.pulse_map.voltages == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(c.experiment.master_seed == 18446744073709551615ULL);
}

TEST_CASE("parse_config: rejections name the offending line") {
  CHECK(config_error("actor.alpha_flip = 1.5\n") != "");
  CHECK(config_error("\n\nactor.colour = 3\n").find("line 3") != std::string::npos);
  CHECK(config_error("actor.n_hidden 10\n").find("line 1") != std::string::npos);
  CHECK(config_error("# x\nactor.n_hidden = ten\n").find("line 2") != std::string::npos);
  CHECK(config_error("actor.dw_min = 0.3\nactor.dw_min = 0.4\n").find("line 2") != std::string::npos);
  CHECK(config_error("actor.update_rule = cubic\n").find("line 1") != std::string::npos);
  CHECK(config_error("harness.goal = 0.5x\n").find("line 1") != std::string::npos);
  CHECK(config_error("device.g_min = 1e-4\n") != "");
  CHECK(config_error("harness.filter_keep = 0.99\n") != "");
  CHECK(config_error("harness.lr_sweep_from = 2\nharness.lr_sweep_to = 1\n") != "");
  CHECK_THROWS_AS(load_config(fs::path(MSV_TEST_TMP) / "does-not-exist.conf"), ConfigError);
}

TEST_CASE("format_number round-trips through an independent parser") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.5005) == "0.50049999999999994");
  msv::Rng rng(5);
  for (int k = 0; k < 20000; ++k) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
    REQUIRE(reparse(format_number(v)) == v);
  }
}

TEST_CASE("learning-curve CSV: row count, range and round trip") {
  msv::ExperimentConfig c;
  c.max_epochs = 3;
  std::vector<msv::TrialResult> trials{msv::run_trial(c, msv::UpdateRule::PowerLaw, 1.1, 1),
                                       msv::run_trial(c, msv::UpdateRule::Linear, 0.75, 2)};
  REQUIRE(trials[0].filtered_curve.size() == 3);
  const fs::path dir = scratch("curve");
  write_file(dir / "curve.csv", [&](std::ostream& os) { write_learning_curve_csv(os, trials); });

  const std::string text = read_bytes(dir / "curve.csv");
  CHECK(text.rfind("trial,epoch,raw_reward,filtered_reward\n", 0) == 0);
  const CsvTable table = read_csv(dir / "curve.csv");
  REQUIRE(table.rows.size() == 6);
  for (std::size_t r = 0; r < 6; ++r) {
    const auto& row = table.rows[r];
    const auto& trial = trials[r / 3];
    CHECK(row[0] == std::to_string(r / 3));
    CHECK(row[1] == std::to_string(r % 3 + 1));
    const double raw = reparse(row[2]), filtered = reparse(row[3]);
    CHECK(raw == trial.raw_curve[r % 3]);
    CHECK(filtered == trial.filtered_curve[r % 3]);
    CHECK(filtered >= 0.0);
    CHECK(filtered <= 1.0);
  }
}

TEST_CASE("CSV emission ignores the global and stream locales") {
  const std::locale comma(std::locale::classic(), new CommaDecimal);
  const std::locale saved = std::locale::global(comma);
  std::ostringstream os;
  os.imbue(comma);
  msv::ComparisonReport report;
  report.a.spec.rule = msv::UpdateRule::PowerLaw;
  report.b.spec.rule = msv::UpdateRule::Linear;
  report.a.epochs.mean = 1234.5;
  report.a.epochs.stddev = 0.25;
  report.a.epochs.converged.assign(1234, 1.0);
  report.b.epochs.mean = 1076.0;
  report.b.epochs.stddev = 484.0;
  report.b.epochs.converged.assign(2, 1.0);
  write_comparison_csv(os, report);
  const std::string formatted = format_number(1234.5);
  std::locale::global(saved);
  CHECK(os.str() == "rule,mean,std,n_converged\npowerlaw,1234.5,0.25,1234\nlinear,1076,484,2\n");
  CHECK(formatted == "1234.5");
}

TEST_CASE("SVG output matches the golden files byte for byte") {
  const fs::path dir = scratch("golden");
  const fs::path golden = MSV_GOLDEN_DIR;
  for (const char* name : {"learning_curve_small", "pulse_map_small"}) {
    CAPTURE(name);
    fs::copy_file(golden / (std::string(name) + ".csv"), dir / (std::string(name) + ".csv"));
    const Run r = cli({"plot", "--input", (dir / (std::string(name) + ".csv")).string(), "--out",
                       dir.string()});
    REQUIRE(r.code == kSuccess);
    CHECK(read_bytes(dir / (std::string(name) + ".svg")) ==
          read_bytes(golden / (std::string(name) + ".svg")));
  }
}

TEST_CASE("SVG coordinates are an affine image of the data") {
  CsvTable t;
  t.header = {"trial", "epoch", "raw_reward", "filtered_reward"};
  t.rows = {{"0", "1", "0", "0"}, {"0", "2", "0", "0.5"}, {"0", "3", "0", "1"}};
  const std::string svg = render_svg(t);
  const auto start = svg.find("points=\"");
  REQUIRE(start != std::string::npos);
  std::istringstream pts(svg.substr(start + 8, svg.find('"', start + 8) - start - 8));
  std::vector<double> xs, ys;
  std::string pair;
  while (pts >> pair) {
    const auto comma = pair.find(',');
    xs.push_back(reparse(pair.substr(0, comma)));
    ys.push_back(reparse(pair.substr(comma + 1)));
  }
  REQUIRE(xs.size() == 3);
  CHECK(xs[1] - xs[0] == doctest::Approx(xs[2] - xs[1]).epsilon(1e-3));
  CHECK(ys[1] - ys[0] == doctest::Approx(ys[2] - ys[1]).epsilon(1e-3));
  CHECK(ys[2] < ys[0]);

  CsvTable unknown;
  unknown.header = {"a", "b"};
  CHECK_THROWS_AS(render_svg(unknown), PlotError);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  write_text(dir / "bad_key.conf", "actor.n_hidden = 10\nactor.nope = 1\n");
  write_text(dir / "bad_value.conf", "actor.alpha_flip = 1.5\n");
  write_text(dir / "small.conf", kSmallConfig);
  write_text(dir / "a_file", "");
  write_text(dir / "junk.csv", "a,b\n1,2\n");

  CHECK(cli({}).code == kUsageError);
  CHECK(cli({"train", "sweep"}).code == kUsageError);
  CHECK(cli({"fly"}).code == kUsageError);
  CHECK(cli({"train", "--rule", "cubic"}).code == kUsageError);
  CHECK(cli({"train", "--parallelism", "0"}).code == kUsageError);
  CHECK(cli({"--help"}).code == kSuccess);

  const Run missing = cli({"train", "--config", (dir / "missing.conf").string()});
  CHECK(missing.code == kUsageError);
  const Run bad_key = cli({"train", "--config", (dir / "bad_key.conf").string()});
  CHECK(bad_key.code == kUsageError);
  CHECK(bad_key.err.find("line 2") != std::string::npos);
  CHECK(cli({"device-map", "--config", (dir / "bad_value.conf").string()}).code == kUsageError);
  CHECK(cli({"plot"}).code == kUsageError);
  CHECK(cli({"plot", "--input", (dir / "junk.csv").string(), "--out", dir.string()}).code ==
        kUsageError);
  CHECK(cli({"plot", "--input", (dir / "absent.csv").string()}).code == kRuntimeFailure);

  // An output directory below a regular file can never be created.
  const std::string blocked = (dir / "a_file" / "out").string();
  for (const char* sub : {"train", "sweep", "compare", "device-map"}) {
    CAPTURE(sub);
    CHECK(cli({sub, "--config", (dir / "small.conf").string(), "--out", blocked}).code ==
          kRuntimeFailure);
  }
  CHECK(cli({"plot", "--input", (dir / "junk.csv").string(), "--out", blocked}).code ==
        kRuntimeFailure);
}

TEST_CASE("compare reports missing statistics as a runtime failure") {
  const fs::path dir = scratch("nostats");
  write_text(dir / "hopeless.conf", "harness.n_trials = 3\nharness.max_epochs = 5\n");
  CHECK(cli({"compare", "--config", (dir / "hopeless.conf").string(), "--out", dir.string()})
            .code == kRuntimeFailure);
}

TEST_CASE("device-map writes the calibrated grid") {
  const fs::path dir = scratch("devmap");
  const Run r = cli({"device-map", "--out", dir.string()});
  REQUIRE(r.code == kSuccess);
  const CsvTable t = read_csv(dir / "pulse_map.csv");
  CHECK(t.header == std::vector<std::string>{"voltage_v", "duration_s", "onoff_ratio"});
  CHECK(t.rows.size() == 25 * 7);
  bool found = false;
  for (const auto& row : t.rows) {
    if (reparse(row[0]) == 2.5 && reparse(row[1]) == 0.005) {
      found = true;
      CHECK(std::abs(reparse(row[2]) - 47.0) <= 0.5);
    }
    if (std::abs(reparse(row[0])) <= 1.2) CHECK(reparse(row[2]) == 1.0);
  }
  CHECK(found);
}

TEST_CASE("subcommands write their CSVs deterministically") {
  const fs::path dir = scratch("determinism");
  write_text(dir / "small.conf", kSmallConfig);
  const std::string conf = (dir / "small.conf").string();
  struct Case {
    const char* sub;
    std::vector<std::string> files;
  };
  for (const Case& c : {Case{"train", {"learning_curve.csv"}}, Case{"sweep", {"sweep.csv"}},
                        Case{"compare", {"comparison.csv", "stats.csv"}}}) {
    CAPTURE(c.sub);
    const std::string a = (dir / (std::string(c.sub) + "_a")).string();
    const std::string b = (dir / (std::string(c.sub) + "_b")).string();
    REQUIRE(cli({c.sub, "--config", conf, "--out", a}).code == kSuccess);
    REQUIRE(cli({c.sub, "--config", conf, "--out", b, "--parallelism", "3"}).code == kSuccess);
    for (const auto& f : c.files) {
      CAPTURE(f);
      const std::string bytes = read_bytes(fs::path(a) / f);
      CHECK_FALSE(bytes.empty());
      CHECK(bytes == read_bytes(fs::path(b) / f));
    }
  }

  const CsvTable curve = read_csv(dir / "train_a" / "learning_curve.csv");
  CHECK(curve.rows.front()[0] == "0");
  CHECK(curve.rows.back()[0] == "3");
  const CsvTable sweep = read_csv(dir / "sweep_a" / "sweep.csv");
  CHECK(sweep.header ==
        std::vector<std::string>{"rule", "lr_hidden", "mean_epochs", "std_epochs", "n_converged"});
  CHECK(sweep.rows.size() == 2 * 3);
  const CsvTable stats = read_csv(dir / "compare_a" / "stats.csv");
  CHECK(stats.header == std::vector<std::string>{"t", "nu", "p_one_sided", "p_two_sided"});
  CHECK(stats.rows.size() == 1);

  const std::string other = (dir / "seeded").string();
  REQUIRE(cli({"train", "--config", conf, "--out", other, "--seed", "7"}).code == kSuccess);
  CHECK(read_bytes(fs::path(other) / "learning_curve.csv") !=
        read_bytes(dir / "train_a" / "learning_curve.csv"));
}
