#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "minnaert/io.hpp"

using namespace minnaert;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("minnaert_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("sha256 known digests") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("config sections, comments and dump") {
  const auto c = Config::parse("# top comment\nmesh = icosphere:3\n[run]\neps = 0.05 ; trailing\nomega=1.5\n\n[tolerance]\nc_M = 2\n");
  CHECK(c.get("mesh") == "icosphere:3");
  CHECK(c.get("run.eps") == "0.05");
  CHECK(c.get_double("run.omega", 0) == 1.5);
  CHECK(c.get_double("tolerance.c_M", 0) == 2.0);
  CHECK(c.get_double("missing", 7.0) == 7.0);
  CHECK(c.get_or("missing", "x") == "x");
  CHECK_THROWS_AS(c.get("missing"), InputError);
  CHECK(Config::parse(c.dump()).values() == c.values());
  CHECK_THROWS_AS(Config::parse("[run\n"), InputError);
  CHECK_THROWS_AS(Config::parse("novalue\n"), InputError);
  CHECK_THROWS_AS(Config::parse("a = x\n").get_double("a", 0), InputError);
}

TEST_CASE("reals keep 17 significant digits") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_real(v)) == v);
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("csv writer") {
  CsvWriter w({"omega", "A_re", "A_im", "note"});
  w.add(1.5).add(cplx(0.25, -1.0)).add(std::string("ok")).end_row();
  CHECK(w.text() == "omega,A_re,A_im,note\n1.5,0.25,-1,ok\n");
  w.add(1.0);
  CHECK_THROWS(w.end_row());
}

TEST_CASE("manifest records checksums and detects tampering") {
  const auto dir = scratch_dir("manifest");
  CsvWriter w({"x"});
  w.add(1.0).end_row();
  w.save((dir / "a.csv").string());
  ResultManifest m;
  m.run_id = "r1";
  m.command = "test";
  m.config_echo = "eps = 0.05\n";
  m.files.push_back({"a.csv", sha256_file((dir / "a.csv").string())});
  m.warnings.push_back("inside guard band");
  m.save(dir.string());
  CHECK(check_manifest(dir.string()).ok);
  std::ofstream(dir / "a.csv", std::ios::app) << "2\n";
  const auto c = check_manifest(dir.string());
  CHECK_FALSE(c.ok);
  CHECK(c.problems.size() == 1);
  fs::remove(dir / "a.csv");
  CHECK_FALSE(check_manifest(dir.string()).ok);
  CHECK_FALSE(check_manifest((dir / "nowhere").string()).ok);
}

TEST_CASE("matrix dump layout and round trip") {
  const auto dir = scratch_dir("dump");
  CMat A(2, 3);
  A << cplx(1, 2), cplx(3, 4), cplx(5, 6), cplx(-1, 0), cplx(0, -1), cplx(1e-300, 7);
  const auto path = (dir / "a.bin").string();
  dump_matrix(A, path);
  CHECK(fs::file_size(path) == 16 + 16 * 6);
  std::ifstream in(path, std::ios::binary);
  std::uint64_t rc[2];
  double first[4];
  in.read(reinterpret_cast<char*>(rc), sizeof rc);
  in.read(reinterpret_cast<char*>(first), sizeof first);
  CHECK(rc[0] == 2);
  CHECK(rc[1] == 3);
  // row-major: (0,0) then (0,1)
  CHECK(first[0] == 1.0);
  CHECK(first[1] == 2.0);
  CHECK(first[2] == 3.0);
  CHECK(first[3] == 4.0);
  CHECK(load_matrix_dump(path) == A);
  std::ofstream(dir / "short.bin", std::ios::binary) << "abc";
  CHECK_THROWS_AS(load_matrix_dump((dir / "short.bin").string()), InputError);
}
