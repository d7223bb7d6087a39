#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "orthomom/image.hpp"
#include "orthomom/moments.hpp"

namespace fs = std::filesystem;
using namespace orthomom;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const auto d = fs::temp_directory_path() / "orthomom_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run cli(const std::string& args) {
  const auto out = work_dir() / "stdout.txt";
  const auto err = work_dir() / "stderr.txt";
  const std::string cmd = "cd '" + work_dir().string() + "' && '" ORTHOMOM_CLI_PATH "' " + args +
                          " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("usage errors") {
  const auto unknown = cli("frobnicate");
  CHECK(unknown.status == 1);
  CHECK(unknown.out.empty());
  CHECK(unknown.err.find("unknown subcommand 'frobnicate'") != std::string::npos);
  CHECK(unknown.err.find("moments") != std::string::npos);
  CHECK(cli("").status == 1);
  CHECK(cli("moments --in x.pgm").status == 1);
  CHECK(cli("glcm --in x.pgm --angle 30 --out g.csv").status == 1);
  CHECK(cli("bench --suite everything --out b.csv").status == 1);
  CHECK(cli("--help").status == 0);
}

TEST_CASE("model image, discrete moments and reconstruction") {
  REQUIRE(cli("synth --what model --size 1023 --out-dir model").status == 0);
  CHECK(fs::exists(work_dir() / "model" / "model.pgm"));
  REQUIRE(cli("moments --in model/model.csv --family dcheb --order 20 --out mu.csv").status == 0);
  const auto r = cli("reconstruct --moments mu.csv --error-against model/model.csv --out rec.csv");
  REQUIRE(r.status == 0);
  CHECK(std::stod(r.out) <= 1e-12);
  CHECK(r.err.empty());

  SUBCASE("csv round trip matches the in-process reconstruction") {
    const auto m = load_moments_csv(work_dir() / "mu.csv");
    const auto in_process =
        reconstruct(compute_moments(load_image(work_dir() / "model" / "model.csv").intensities(),
                                    MomentKind::DiscreteChebyshev, 20),
                    1023, 1023);
    CHECK(max_abs_difference(load_matrix_csv(work_dir() / "rec.csv"), in_process) <= 1e-12);
    CHECK(max_abs_difference(reconstruct(m, 1023, 1023), in_process) <= 1e-12);
  }
  SUBCASE("pgm output") {
    CHECK(cli("reconstruct --moments mu.csv --out rec.pgm").status == 0);
    CHECK(load_pgm(work_dir() / "rec.pgm").rows() == 1023);
  }
}

TEST_CASE("moment csv body is (q+1) x (q+1)") {
  REQUIRE(cli("synth --what model --size 40 --out-dir small").status == 0);
  REQUIRE(cli("moments --in small/model.pgm --family legendre --order 3 --out m3.csv").status == 0);
  std::istringstream text(slurp(work_dir() / "m3.csv"));
  std::string line;
  std::getline(text, line);
  CHECK(line == "family=legendre,order=3,rows=39,cols=39");
  std::size_t rows = 0;
  while (std::getline(text, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
    ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("exit codes for io and domain errors") {
  REQUIRE(cli("synth --what model --size 9 --out-dir tiny").status == 0);
  const auto domain = cli("moments --in tiny/model.pgm --family dcheb --order 9 --out x.csv");
  CHECK(domain.status == 3);
  CHECK(domain.out.empty());
  CHECK(domain.err.find("error:") == 0);
  CHECK(cli("moments --in missing.pgm --order 2 --out x.csv").status == 2);
  std::ofstream(work_dir() / "broken.pgm") << "P5\n2 2\n255\nabcdef";
  CHECK(cli("moments --in broken.pgm --order 1 --out x.csv").status == 2);
  CHECK(cli("reconstruct --moments missing.csv --out r.pgm").status == 2);
}

TEST_CASE("identical invocations give identical files") {
  REQUIRE(cli("synth --what model --size 65 --out-dir det").status == 0);
  for (const char* family : {"legendre", "cheb2", "dcheb", "legendre-cf"}) {
    const std::string base = std::string("moments --in det/model.pgm --order 6 --family ") + family;
    REQUIRE(cli(base + " --out a.csv").status == 0);
    REQUIRE(cli(base + " --out b.csv --threads 3").status == 0);
    CHECK(slurp(work_dir() / "a.csv") == slurp(work_dir() / "b.csv"));
  }
  REQUIRE(cli("glcm --in det/model.pgm --distance 2 --angle 135 --levels 16 --out g1.csv").status ==
          0);
  REQUIRE(cli("glcm --in det/model.pgm --distance 2 --angle 135 --levels 16 --out g2.csv").status ==
          0);
  const auto g = slurp(work_dir() / "g1.csv");
  CHECK(g == slurp(work_dir() / "g2.csv"));
  CHECK(g.rfind("distance=2,angle=135,levels=16,symmetric=0,normalized=0\n", 0) == 0);
  CHECK(count_lines(g) == 17);
}

TEST_CASE("dataset, features and classification") {
  REQUIRE(cli("synth --what dataset --size 32 --seed 4 --out-dir data").status == 0);
  REQUIRE(fs::exists(work_dir() / "data" / "manifest.json"));
  const std::string feats =
      "features --in data/manifest.json --source glcm --family dcheb --order 3 --levels 64";
  REQUIRE(cli(feats + " --out f1.csv").status == 0);
  REQUIRE(cli(feats + " --out f2.csv --threads 4").status == 0);
  const auto f = slurp(work_dir() / "f1.csv");
  CHECK(f == slurp(work_dir() / "f2.csv"));
  CHECK(count_lines(f) == 161);
  CHECK(f.find("dcheb/q3/glcm/d1/a0-45-90-135/L64,") != std::string::npos);

  REQUIRE(cli("classify --features f1.csv --repeats 10 --seed 3 --out r1.json").status == 0);
  REQUIRE(cli("classify --features f1.csv --repeats 10 --seed 3 --out r2.json --threads 2").status ==
          0);
  CHECK(slurp(work_dir() / "r1.json") == slurp(work_dir() / "r2.json"));
  CHECK(slurp(work_dir() / "r1.json").find("\"per_orientation\"") != std::string::npos);

  CHECK(cli("features --in data/manifest.json --source pixels --order 3 --out x.csv").status == 1);
  CHECK(cli("classify --features missing.csv --out r.json").status == 2);
}

TEST_CASE("timing bench suite") {
  REQUIRE(cli("bench --suite timing --runs 1 --out bench.csv").status == 0);
  const auto b = slurp(work_dir() / "bench.csv");
  CHECK(b.rfind("pipeline,n,rows,cols,seconds,error,basis_seconds\n", 0) == 0);
  CHECK(count_lines(b) == 1 + 8 * 2 + 10 * 2);
}
