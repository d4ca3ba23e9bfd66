#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

std::string g_cli;
std::string g_dir;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  std::string cmd = g_cli + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

void write_file(const std::string& name, const std::string& content) {
  std::ofstream out(g_dir + "/" + name);
  out << content;
}

std::string path(const std::string& name) { return g_dir + "/" + name; }

}  // namespace

TEST_CASE("hf-eval") {
  RunResult r = run("hf-eval \"(subset #1 #3)\"");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("answer True") != std::string::npos);
  CHECK(run("hf-eval \"(mem #0 #0)\"").output.find("answer False") !=
        std::string::npos);
  CHECK(run("hf-eval \"(mem a b)\"").exit_code == 2);  // free variables
  CHECK(run("hf-eval \"(frob)\"").exit_code == 2);
  CHECK(run("no-such-command").exit_code == 2);
}

TEST_CASE("generic-build") {
  RunResult r = run("generic-build --model hf --poset " + path("v.poset"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("p0 1") != std::string::npos);
  CHECK(r.output.find("1 in") != std::string::npos);
  CHECK(r.output.find("2 out") != std::string::npos);
  CHECK(r.output.find("Atomic") != std::string::npos);
  // Only atomic-level queries appear in the counts block.
  CHECK(r.output.find("Delta0") == std::string::npos);
  CHECK(r.output.find("Sigma") == std::string::npos);

  CHECK(run("generic-build --model hf --poset " + path("bad.poset")).exit_code == 2);
  CHECK(run("generic-build --model hf --poset " + path("nope.poset")).exit_code == 2);
}

TEST_CASE("force-query, both spellings") {
  std::string args = " --poset " + path("v.poset") + " --p 1 --phi " +
                     path("phi.txt") + " --names " + path("names.txt");
  RunResult a = run("force-query" + args);
  CHECK(a.exit_code == 0);
  CHECK(a.output.find("answer True") != std::string::npos);
  RunResult b = run("force query" + args);
  CHECK(b.output == a.output);
  RunResult c = run("force-query --poset " + path("v.poset") + " --p 9 --phi " +
                    path("phi.txt"));
  CHECK(c.exit_code == 1);  // 9 is not a condition
}

TEST_CASE("extend and matrix round trip") {
  RunResult r = run("extend --poset " + path("v.poset") + " --rank 2 --size 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("classes 4") != std::string::npos);
  CHECK(r.output.find("0 -> 0") != std::string::npos);

  RunResult mb = run("matrix-build --columns 3 --family " + path("fam.txt") +
                     " --z " + path("z.hex") + " --steps 16 --out " +
                     path("m.dump"));
  CHECK(mb.exit_code == 0);
  RunResult md = run("matrix-decode --in " + path("m.dump") + " --A 0,2 --bits 16");
  CHECK(md.exit_code == 0);
  CHECK(md.output.find("1101111010101101") != std::string::npos);  // 0xdead
  // A family member cannot decode.
  CHECK(run("matrix-decode --in " + path("m.dump") + " --A 0,1 --bits 8").exit_code == 2);
}

TEST_CASE("functor and demo") {
  RunResult r = run("functor-run --poset " + path("v.poset") +
                    " --choice least --check-laws");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("identity ok") != std::string::npos);
  CHECK(r.output.find("composition ok") != std::string::npos);

  RunResult d = run("demo nonfunctorial --poset " + path("v.poset") +
                    " --orders ab ba");
  CHECK(d.exit_code == 0);
  CHECK(d.output.find("diverge-at 1") != std::string::npos);
  CHECK(d.output.find("generic-a yes") != std::string::npos);
  CHECK(d.output.find("generic-b yes") != std::string::npos);
  RunResult d2 = run("demo-nonfunctorial --poset " + path("v.poset") +
                     " --orders ab ab");
  CHECK(d2.output.find("agreement certified") != std::string::npos);
  RunResult d3 = run("demo nonfunctorial --cohen --orders 0,1,2,3,4,5,6,7 6,7,0,1,2,3,4,5");
  CHECK(d3.exit_code == 0);
  CHECK(d3.output.find("diverge-at-bit") != std::string::npos);
}

TEST_CASE("grounds-list") {
  RunResult r = run("grounds-list --mock parity --budget 8");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("ground 0 parameter 0") != std::string::npos);
  CHECK(r.output.find("ground 1 parameter 1") != std::string::npos);
}

TEST_CASE("byte-identical reruns") {
  std::vector<std::string> commands = {
      "hf-eval \"(ordinal #11)\"",
      "generic-build --model hf --poset " + path("v.poset"),
      "extend --poset " + path("v.poset") + " --rank 1 --size 2",
      "demo nonfunctorial --poset " + path("v.poset") + " --orders ab ba",
  };
  for (const std::string& cmd : commands) {
    RunResult first = run(cmd);
    for (int i = 0; i < 2; ++i) {
      RunResult again = run(cmd);
      CHECK(again.exit_code == first.exit_code);
      CHECK(again.output == first.output);
    }
  }
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli [doctest options] <cli-binary>\n");
    return 1;
  }
  g_cli = argv[argc - 1];
  char tmpl[] = "/tmp/setforge_cli_test_XXXXXX";
  char* dir = mkdtemp(tmpl);
  if (!dir) return 1;
  g_dir = dir;
  write_file("v.poset", "COND 0\nCOND 1\nCOND 2\nLEQ 1 0\nLEQ 2 0\n");
  write_file("bad.poset", "COND 0\nFROB 1\n");
  write_file("phi.txt", "(eq s t)\n");
  write_file("names.txt", "NAME s {({}, 1)}\nNAME t {({}, 0)}\n");
  write_file("z.hex", "deadbeef12345678\n");
  write_file("fam.txt", "A\nA 0\nA 1\nA 2\nA 0 1\n");
  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv);
  int rc = ctx.run();
  std::string cleanup = "rm -rf " + g_dir;
  std::system(cleanup.c_str());
  return rc;
}
