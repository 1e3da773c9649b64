// config parsing, outputs and the vqs executable
#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "vqs/config.hpp"
#include "vqs/experiments.hpp"
#include "vqs/output.hpp"

using namespace vqs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vqs_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Shell {
  int code;
  std::string out;
};

Shell sh(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(VQS_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

void expect_key_error(const std::string& text, const std::string& key, int line) {
  try {
    parse_config(text);
    FAIL("no error for: " << text);
  } catch (const ConfigKeyError& e) {
    CHECK(e.key == key);
    CHECK(e.line == line);
    CHECK(std::string(e.what()).find(key) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = parse_config("experiment = \"free-particle\"\n");
  CHECK(c.experiment == Experiment::FreeParticle);
  CHECK(c.units == UnitSystem::Natural);
  CHECK(c.omega_max == 1.0);
  CHECK(c.dt == 0.0);  // stability rule
  CHECK(c.alpha == codata::alpha);
  CHECK(c.output_dir == "vqs_out");

  const auto si = parse_config("experiment = classical-runaway\nunits = si\n");
  CHECK(si.mass == codata::m_electron);
  CHECK(si.omega_max == 1e20);
}

TEST_CASE("config errors name the key and line") {
  expect_key_error("experiment = \"vem-cancel\"\nomega_max = -1\n", "omega_max", 2);
  expect_key_error("experiment = vem-cancel\n\n# note\nbogus = 3\n", "bogus", 4);
  expect_key_error("experiment = vem-cancel\ndt = 1\ndt = 2\n", "dt", 3);
  expect_key_error("experiment = vem-cancel\nt_end =\n", "t_end", 2);
  expect_key_error("omega_max = 2\n", "experiment", 0);
  expect_key_error("experiment = \"nope\"\n", "experiment", 1);
  expect_key_error("experiment = vem-cancel\ndim = 2.5\n", "dim", 2);
  expect_key_error("experiment = vem-cancel\nconstants.hbar = 2\n", "constants.hbar", 2);
  expect_key_error("experiment = vem-cancel\nunits = si\nalpha = 0.1\n", "alpha", 3);
  expect_key_error("experiment = free-particle\nunits = si\n", "units", 2);
  expect_key_error("experiment = vem-cancel\nramp.kind = square\n", "ramp.kind", 2);
  expect_key_error("experiment = vem-cancel\nramp.durations = \"1, x\"\n", "ramp.durations", 2);
  expect_key_error("experiment = vem-cancel\njust text\n", "just text", 2);
}

TEST_CASE("comments, quoting and lists") {
  const auto c = parse_config(
      "# header\n"
      "experiment = \"false-decoherence\"   # trailing\n"
      "output_dir = \"out#1\"\n"
      "omega_max_list = 1, 2,4\n"
      "markov = true\n");
  CHECK(c.output_dir == "out#1");
  CHECK(c.omega_max_list == std::vector<double>{1.0, 2.0, 4.0});
  CHECK(c.markov);
}

TEST_CASE("canonical text round trips") {
  for (Experiment e : all_experiments()) {
    const auto p = preset(e);
    CHECK(parse_config(to_text(p)) == p);
    CHECK(to_text(parse_config(to_text(p))) == to_text(p));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    ExperimentConfig c = preset(all_experiments()[i % all_experiments().size()]);
    c.omega_max = std::exp(10.0 * (u(rng) - 0.5));
    c.omega0 = u(rng) + 1e-3;
    c.mass = 1.0 / (u(rng) + 1e-3);
    c.dt = u(rng) * 0.1;
    c.x0 = u(rng) - 0.5;
    c.f_start = u(rng);
    c.ramp_durations = {u(rng) * 1e3 + 1.0, 1.0 / 3.0};
    c.markov = u(rng) < 0.5;
    c.alpha = 0.5 * u(rng) + 1e-6;
    const auto back = parse_config(to_text(c));
    REQUIRE(back == c);
    CHECK(back.omega_max == c.omega_max);
    CHECK(back.ramp_durations == c.ramp_durations);
  }
}

TEST_CASE("si config builds the override context") {
  const auto c = parse_config("experiment = coherence-length\nunits = si\nconstants.hbar = 2e-34\n");
  const auto ctx = make_context(c);
  CHECK(ctx.hbar == 2e-34);
  CHECK(ctx.c == codata::c);
  CHECK(ctx.mass_bare == codata::m_electron);
}

TEST_CASE("stability rule") {
  const auto osc = SystemSpec::harmonic(0.5, 1.0, OscillatorBasis{20, 0.5});
  CHECK(stability_dt(osc, 1.0) == doctest::Approx(0.1));
  const auto grid = SystemSpec::free(2.0, GridBasis{101, -5.0, 5.0});
  CHECK(stability_dt(grid, 1.0) == doctest::Approx(0.01));
}

TEST_CASE("csv and sha256") {
  CsvTable t({"a", "b"});
  t.add_row({0.1, 1.0 / 3.0});
  CHECK(t.str() == "a,b\n0.10000000000000001,0.33333333333333331\n");
  CHECK_THROWS(t.add_row({1.0}));
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(std::stod(format_double(std::nextafter(1.0, 2.0))) == std::nextafter(1.0, 2.0));
}

TEST_CASE("runs are deterministic and the manifest covers every file") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (Experiment e : {Experiment::VemCancel, Experiment::FalseDecoherence, Experiment::KernelsDump}) {
    const auto ra = run_experiment(preset(e), a);
    const auto rb = run_experiment(preset(e), b);
    CHECK(ra.pass());
    REQUIRE(ra.files == rb.files);
    const auto man = nlohmann::json::parse(slurp(ra.dir / "manifest.json"));
    CHECK(man["config"] == to_text(preset(e)));
    CHECK(parse_config(man["config"].get<std::string>()) == preset(e));
    REQUIRE(man["constants"].size() >= 1);
    CHECK(man["constants"][0]["hbar"] == 1.0);
    CHECK(man["constants"][0]["alpha"] == codata::alpha);
    CHECK(man["version"] == VQS_VERSION);
    CHECK(man["files"].size() == ra.files.size());
    for (const auto& f : ra.files) {
      const std::string x = slurp(ra.dir / f), y = slurp(rb.dir / f);
      CHECK_MESSAGE(x == y, f);
      CHECK(man["files"][f]["sha256"] == sha256_hex(x));
      CHECK_FALSE(fs::exists(ra.dir / (f + ".tmp")));
    }
  }
}

TEST_CASE("propagator run is byte-identical across repeats") {
  auto c = preset(Experiment::HarmonicDamping);
  c.dim = 16;
  c.t_end = 4.0 * 2.0 * 3.141592653589793 / c.omega0;
  const auto ra = run_experiment(c, scratch("prop_a"));
  const auto rb = run_experiment(c, scratch("prop_b"));
  CHECK(ra.exit_code != kInvariantBreach);
  for (const auto& f : ra.files) CHECK_MESSAGE(slurp(ra.dir / f) == slurp(rb.dir / f), f);
  CHECK(slurp(ra.dir / "manifest.json") == slurp(rb.dir / "manifest.json"));
}

TEST_CASE("summary reports failing checks") {
  auto c = preset(Experiment::CoherenceLength);
  c.alpha = 0.01;  // plateau no longer 25.41, so only the closed-form check runs
  const auto r = run_experiment(c, scratch("alpha"));
  CHECK(r.pass());
  CHECK(r.checks.size() == 1);

  auto bad = preset(Experiment::FalseDecoherence);
  bad.ramp_kind = "constant";  // never switched off: nothing is restored
  const auto rb = run_experiment(bad, scratch("short"));
  CHECK(rb.exit_code == kToleranceFail);
  CHECK(slurp(rb.dir / "summary.json").find("\"status\": \"fail\"") != std::string::npos);

  bad.ramp_kind = "raised_cosine";
  bad.ramp_durations = {1.0};
  const auto rc = run_experiment(bad, scratch("shorter"));
  CHECK(rc.exit_code == kConfigError);
  CHECK(slurp(rc.dir / "summary.json").find("config-error") != std::string::npos);
}

TEST_CASE("executable: verbs and exit codes") {
  const auto dir = scratch("exe");
  const fs::path cfg = dir / "vem.cfg";
  std::ofstream(cfg) << "experiment = \"vem-cancel\"\noutput_dir = \"" << (dir / "ignored").string()
                     << "\"\n";

  auto r = sh("run " + cfg.string(), "VQS_OUTPUT_DIR=" + (dir / "env").string());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "env" / "vem-cancel" / "summary.json"));
  CHECK(fs::exists(dir / "env" / "vem-cancel" / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "ignored"));

  std::ofstream(dir / "bad.cfg") << "experiment = \"vem-cancel\"\nomega_max = -1\n";
  r = sh("run " + (dir / "bad.cfg").string());
  CHECK(r.code == 3);
  CHECK(r.out.find("omega_max") != std::string::npos);
  CHECK(r.out.find("line 2") != std::string::npos);

  CHECK(sh("frobnicate").code == 3);
  CHECK(sh("kernels dump --points 1").code == 3);

  r = sh("kernels dump --points 5");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("tau,noise,dissipation,n1,n2\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);

  r = sh("decoherence switch -s ramp.durations=100,1000");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("ramp_duration,epsilon,n2_switched,n2_unswitched,ratio,analytic_limit\n", 0) == 0);

  r = sh("eom classical --summary " + (dir / "al.json").string());
  CHECK(r.code == 0);
  CHECK(r.out.rfind("t,x,v,a\n", 0) == 0);
  CHECK(slurp(dir / "al.json").find("\"growth_rate\"") != std::string::npos);

  r = sh("eom quantum -s omega0=0.5 -s x0=1 -s t_end=10 -s dt=0.01");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("t,x_mean,p_mean\n", 0) == 0);

  r = sh("evolve -s dim=16 -s omega0=0.5 -s mass=1 -s x0=1 -s t_end=2 -s dt=0.05");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("t,x_mean,p_mean,x_var,p_var,purity,trace_err,herm_err,min_eig\n", 0) == 0);

  // RK4 far outside its stability region: the state explodes until the
  // per-step trace drift exceeds tolerance
  r = sh("evolve -s dim=16 -s omega0=1 -s mass=1 -s x0=1 -s t_end=5000 -s dt=50 -o " +
         (dir / "boom.csv").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("invariant breach") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "boom.csv"));

  r = sh("preset harmonic-damping");
  CHECK(r.code == 0);
  CHECK(parse_config(r.out) == preset(Experiment::HarmonicDamping));
}
