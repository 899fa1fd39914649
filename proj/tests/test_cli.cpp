#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "cli_harness.hpp"

namespace {

// x^4 + x + 1 companion CA, written once per process
std::string spec4_path() {
  static std::string path = [] {
    auto dir = cli::scratch_dir("cli");
    auto p = dir / "ca4.ca";
    auto r = cli::run("gen --p 2 --n 4 --primitive --seed 0 -o " + p.string());
    REQUIRE(r.exit_code == 0);
    return p.string();
  }();
  return path;
}

// the order-5 group CA
std::string group_spec_path() {
  static std::string path = [] {
    auto dir = cli::scratch_dir("cli");
    auto p = dir / "group.ca";
    std::ofstream out(p);
    out << "lchca v1\n"
           "p 2\n"
           "n 4\n"
           "matrix 2:4x4:0,0,0,1,1,0,0,1,0,1,0,1,0,0,1,1\n";
    out.close();
    return p.string();
  }();
  return path;
}

// the worked-example CA: companion matrix of x^4 + x + 1
std::string fixed_spec_path() {
  static std::string path = [] {
    auto dir = cli::scratch_dir("cli");
    auto p = dir / "fixed.ca";
    std::ofstream out(p);
    out << "lchca v1\n"
           "p 2\n"
           "n 4\n"
           "matrix 2:4x4:0,0,0,1,1,0,0,1,0,1,0,0,0,0,1,0\n"
           "charpoly 2:1,1,0,0,1\n";
    out.close();
    return p.string();
  }();
  return path;
}

}  // namespace

TEST_CASE("gen is deterministic and classify matches the request") {
  auto a = cli::run("gen --p 2 --n 4 --primitive --seed 0");
  auto b = cli::run("gen --p 2 --n 4 --primitive --seed 0");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("lchca v1") == 0);

  auto c = cli::run("classify --spec " + spec4_path());
  CHECK(c.exit_code == 0);
  CHECK(cli::last_line(c.out) == "hybrid-max-length");

  auto usage = cli::run("gen --p 2 --n 1");
  CHECK(usage.exit_code == 2);
}

TEST_CASE("group CA spec classifies as hybrid-group") {
  // companion of x^4 + x^3 + x^2 + x + 1
  auto r = cli::run("classify --spec " + group_spec_path());
  CHECK(r.exit_code == 0);
  CHECK(cli::last_line(r.out) == "hybrid-group");
}

TEST_CASE("run echoes at tau = 0 and applies the transition matrix") {
  auto echo = cli::run("run --spec " + spec4_path() + " --state 1000 --tau 0");
  CHECK(echo.exit_code == 0);
  CHECK(cli::last_line(echo.out) == "1000");

  // library oracle for tau = 4 on the generated spec
  auto r = cli::run("run --spec " + spec4_path() + " --state 1000 --tau 4");
  CHECK(r.exit_code == 0);
  auto twice = cli::run("run --spec " + spec4_path() + " --state " +
                        cli::last_line(cli::run("run --spec " + spec4_path() +
                                                " --state 1000 --tau 2")
                                           .out) +
                        " --tau 2");
  CHECK(cli::last_line(r.out) == cli::last_line(twice.out));

  auto bad = cli::run("run --spec " + spec4_path() + " --state 10a0 --tau 1");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("the fixed x^4+x+1 CA reproduces the worked example") {
  auto r = cli::run("run --spec " + fixed_spec_path() + " --state 1000 --tau 4");
  CHECK(r.exit_code == 0);
  CHECK(cli::last_line(r.out) == "1100");
}

TEST_CASE("ddp subcommand") {
  auto same = cli::run("ddp --spec " + spec4_path() + " --s 1000 --t 1000");
  CHECK(same.exit_code == 0);
  CHECK(cli::last_line(same.out) == "0");

  auto full = cli::run("ddp --spec " + spec4_path() + " --s 1000 --t 1000 --path full");
  CHECK(full.exit_code == 0);
  CHECK(cli::last_line(full.out) == "0");

  // group CA unreachable case: distinct exit code and the literal token
  auto un = cli::run("ddp --spec " + group_spec_path() + " --s 1000 --t 1100");
  CHECK(un.exit_code == 1);
  CHECK(cli::last_line(un.out) == "unreachable");
}

TEST_CASE("fdp and sddp subcommands") {
  const std::string fixed = fixed_spec_path();

  auto hit = cli::run("fdp --spec " + fixed + " --s 1000 --x 00");
  CHECK(hit.exit_code == 0);
  CHECK(cli::last_line(hit.out) == "2");

  auto sddp_hit = cli::run("sddp --spec " + fixed + " --s 1000 --x 00 --delta 8");
  CHECK(sddp_hit.exit_code == 0);
  CHECK(cli::last_line(sddp_hit.out) == "2");

  auto miss = cli::run("sddp --spec " + fixed + " --s 1000 --x 00 --delta 2");
  CHECK(miss.exit_code == 1);
  CHECK(cli::last_line(miss.out) == "none");

  auto coords = cli::run("sddp --spec " + fixed + " --s 1000 --x 00 --delta 8 --coords 2,3");
  CHECK(coords.exit_code == 0);
}

TEST_CASE("problem statement files drive the solvers") {
  auto dir = cli::scratch_dir("cli");

  {
    std::ofstream out(dir / "ddp.problem");
    out << "lchca-problem v1\n"
           "kind ddp\n"
           "spec fixed.ca\n"  // resolved relative to the statement file
           "s 1000\n"
           "t 1100\n";
  }
  fixed_spec_path();  // ensure the referenced spec exists in the scratch dir
  auto ddp = cli::run("ddp --instance " + (dir / "ddp.problem").string());
  CHECK(ddp.exit_code == 0);
  CHECK(cli::last_line(ddp.out) == "4");

  {
    std::ofstream out(dir / "sddp.problem");
    out << "lchca-problem v1\n"
           "kind sddp\n"
           "spec fixed.ca\n"
           "s 1000\n"
           "x 00\n"
           "coords 0,1\n"
           "delta 8\n";
  }
  auto sddp = cli::run("sddp --instance " + (dir / "sddp.problem").string());
  CHECK(sddp.exit_code == 0);
  CHECK(cli::last_line(sddp.out) == "2");

  // kind mismatch between the file and the subcommand
  auto wrong = cli::run("fdp --instance " + (dir / "sddp.problem").string());
  CHECK(wrong.exit_code == 2);

  // mixing --instance with --spec is a usage error
  auto mixed = cli::run("ddp --instance " + (dir / "ddp.problem").string() +
                        " --spec " + fixed_spec_path());
  CHECK(mixed.exit_code == 2);
}

TEST_CASE("cycles and stats subcommands") {
  auto cycles = cli::run("cycles --spec " + group_spec_path());
  CHECK(cycles.exit_code == 0);
  CHECK(cli::last_line(cycles.out) == "3");
  CHECK(cycles.out.find("length 5") != std::string::npos);

  auto structured = cli::run("cycles --spec " + group_spec_path() + " --format structured");
  CHECK(structured.exit_code == 0);
  CHECK(structured.out.find("\"count\": 3") != std::string::npos);

  auto dir = cli::scratch_dir("cli");
  auto big = dir / "ca16.ca";
  REQUIRE(cli::run("gen --p 2 --n 16 --primitive --seed 0 -o " + big.string()).exit_code == 0);
  auto stats = cli::run("stats --spec " + big.string() + " --samples 2000 --seed 1");
  CHECK(stats.exit_code == 0);
  // last line is the max pairwise deviation; loose sanity bound at 2000 samples
  CHECK(std::stod(cli::last_line(stats.out)) < 0.08);
}

TEST_CASE("pow pipeline via files") {
  auto dir = cli::scratch_dir("cli");
  auto challenge = dir / "c.pow";
  auto witness = dir / "w.txt";

  auto make = cli::run("pow-challenge --p 2 --n 16 --k 8 --seed 0 --message pipeline -o " +
                       challenge.string());
  REQUIRE(make.exit_code == 0);

  auto prove = cli::run("pow-prove --challenge " + challenge.string() + " -o " +
                        witness.string());
  REQUIRE(prove.exit_code == 0);
  const std::string tau = cli::last_line(prove.out);

  auto accept = cli::run("pow-verify --challenge " + challenge.string() + " --solution " +
                         witness.string());
  CHECK(accept.exit_code == 0);
  CHECK(cli::last_line(accept.out) == "accept");

  // tampered witness: nonzero exit, reason on stderr
  auto reject = cli::run("pow-verify --challenge " + challenge.string() + " --tau " +
                         std::to_string(std::stoull(tau) + 1));
  CHECK(reject.exit_code == 1);
  CHECK(reject.err.find("reject") != std::string::npos);

  // difficulty must stay below the cell count
  auto bad = cli::run("pow-challenge --p 2 --n 8 --k 8 --message x");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("byte-identical outputs under fixed seeds and parallel jobs") {
  auto dir = cli::scratch_dir("cli");
  auto big = dir / "ca16.ca";
  REQUIRE(cli::run("gen --p 2 --n 16 --primitive --seed 0 -o " + big.string()).exit_code == 0);

  auto s1 = cli::run("stats --spec " + big.string() + " --samples 3000 --seed 5 --jobs 1");
  auto s4 = cli::run("stats --spec " + big.string() + " --samples 3000 --seed 5 --jobs 4");
  CHECK(s1.exit_code == 0);
  CHECK(s1.out == s4.out);

  auto q1 = cli::run("sddp --spec " + big.string() +
                     " --s 1010101010101010 --x 0110 --delta 4000 --jobs 1");
  auto q4 = cli::run("sddp --spec " + big.string() +
                     " --s 1010101010101010 --x 0110 --delta 4000 --jobs 4");
  CHECK(q1.out == q4.out);
  CHECK(q1.exit_code == q4.exit_code);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(cli::run("run --spec /nonexistent.ca --state 1 --tau 0").exit_code == 2);
  CHECK(cli::run("definitely-not-a-subcommand").exit_code == 2);
  CHECK(cli::run("ddp --spec " + spec4_path() + " --s 1000").exit_code == 2);
}
