#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args, const fs::path& dir) {
    fs::path out_file = dir / "cli_stdout.txt";
    std::string cmd = std::string(DYNSKETCH_CLI_PATH) + " " + args + " > " + out_file.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    return result;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / fs::path("dynsketch_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("build, size and query round trip through the binary") {
    TempDir dir;
    write_file(dir.path / "g.txt", "6 3 0\nt 0\nt 2\nt 4\ne 0 1 1\ne 1 2 1\ne 3 4 1\ne 4 5 1\n");
    write_file(dir.path / "q.txt", "q 0 1\n");

    CliResult build = run_cli("build --problem matching --delta 0.01 --seed 9 -i " + (dir.path / "g.txt").string() +
                                  " -o " + (dir.path / "m.dsk").string(),
                              dir.path);
    REQUIRE(build.exit_code == 0);
    // 4 * 3^2 + 6 header words
    CHECK(build.output.find("42 words (336 bytes)") != std::string::npos);

    CliResult size = run_cli("size -i " + (dir.path / "m.dsk").string(), dir.path);
    CHECK(size.exit_code == 0);
    CHECK(size.output.find("42 words") != std::string::npos);

    CliResult query = run_cli("query -i " + (dir.path / "m.dsk").string() + " -q " + (dir.path / "q.txt").string(),
                              dir.path);
    REQUIRE(query.exit_code == 0);
    CliResult oracle = run_cli("oracle --problem matching -i " + (dir.path / "g.txt").string() + " -q " +
                                   (dir.path / "q.txt").string(),
                               dir.path);
    REQUIRE(oracle.exit_code == 0);
    CHECK(query.output == oracle.output);

    // no query file means the empty query: the static matching size
    CliResult empty_q = run_cli("query -i " + (dir.path / "m.dsk").string(), dir.path);
    CliResult empty_o = run_cli("oracle --problem matching -i " + (dir.path / "g.txt").string(), dir.path);
    REQUIRE(empty_q.exit_code == 0);
    CHECK(empty_q.output == empty_o.output);
}

TEST_CASE("same seed means byte-identical containers") {
    TempDir dir;
    write_file(dir.path / "g.txt", "5 2 0\nt 0\nt 4\ne 0 1 1\ne 1 2 1\ne 2 3 1\ne 3 4 1\n");
    std::string base = "build --problem matching --delta 0.02 --seed 4242 -i " + (dir.path / "g.txt").string();
    REQUIRE(run_cli(base + " -o " + (dir.path / "a.dsk").string(), dir.path).exit_code == 0);
    REQUIRE(run_cli(base + " -o " + (dir.path / "b.dsk").string(), dir.path).exit_code == 0);
    CHECK(read_bytes(dir.path / "a.dsk") == read_bytes(dir.path / "b.dsk"));

    REQUIRE(run_cli("build --problem matching --delta 0.02 --seed 1 -i " + (dir.path / "g.txt").string() + " -o " +
                        (dir.path / "c.dsk").string(),
                    dir.path)
                .exit_code == 0);
    CHECK(read_bytes(dir.path / "a.dsk") != read_bytes(dir.path / "c.dsk"));
}

TEST_CASE("exit codes follow the contract") {
    TempDir dir;
    // 1: usage
    CHECK(run_cli("build --problem nonsense -i x -o y", dir.path).exit_code == 1);
    CHECK(run_cli("definitely-not-a-subcommand", dir.path).exit_code == 1);

    // 2: parse errors carry the line number
    write_file(dir.path / "bad.txt", "3 2\n");
    CliResult parse = run_cli("build --problem matching -i " + (dir.path / "bad.txt").string() + " -o " +
                                  (dir.path / "out.dsk").string(),
                              dir.path);
    CHECK(parse.exit_code == 2);
    CHECK(parse.output.find("line 1") != std::string::npos);

    // 2: stale container version
    write_file(dir.path / "g.txt", "2 2 0\nt 0\nt 1\ne 0 1 1\n");
    REQUIRE(run_cli("build --problem matching -i " + (dir.path / "g.txt").string() + " -o " +
                        (dir.path / "v.dsk").string(),
                    dir.path)
                .exit_code == 0);
    {
        std::fstream f(dir.path / "v.dsk", std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(4);
        char two = 2;
        f.write(&two, 1);
    }
    CHECK(run_cli("query -i " + (dir.path / "v.dsk").string(), dir.path).exit_code == 2);

    // 3: verification failure is reported distinctly (empty corpus trips the gate)
    CHECK(run_cli("verify --problem matching --trials 0", dir.path).exit_code == 3);
}

TEST_CASE("cut workflow over the CLI") {
    TempDir dir;
    write_file(dir.path / "g.txt", "3 2 1\nt 0\nt 2\ne 0 1 2\ne 1 2 2\ne 0 2 1\n");
    REQUIRE(run_cli("build --problem cut --delta 0.05 --seed 3 -i " + (dir.path / "g.txt").string() + " -o " +
                        (dir.path / "c.dsk").string(),
                    dir.path)
                .exit_code == 0);
    CliResult via_sketch = run_cli("query -i " + (dir.path / "c.dsk").string() + " --cut \"A:0 B:1\"", dir.path);
    REQUIRE(via_sketch.exit_code == 0);
    CliResult via_oracle =
        run_cli("oracle --problem cut -i " + (dir.path / "g.txt").string() + " --cut \"A:0 B:1\"", dir.path);
    REQUIRE(via_oracle.exit_code == 0);
    CHECK(via_sketch.output == via_oracle.output);
    CHECK(via_oracle.output == "3\n");
}

TEST_CASE("fixture emission parses back and verifies") {
    TempDir dir;
    CliResult fx = run_cli("fixture --name membership --domain 9 --members 1,3,7 -o " +
                               (dir.path / "memb.txt").string() + " --queries-out " + (dir.path / "queries.txt").string(),
                           dir.path);
    REQUIRE(fx.exit_code == 0);
    CliResult oracle = run_cli("oracle --problem matching -i " + (dir.path / "memb.txt").string(), dir.path);
    CHECK(oracle.exit_code == 0);
    CHECK(oracle.output == "6\n");  // 2 sqrt(9) with no query

    CliResult cutlb = run_cli("fixture --name cutlb --kprime 2 --bits 10 -o " + (dir.path / "cutlb.txt").string(),
                              dir.path);
    REQUIRE(cutlb.exit_code == 0);
    CliResult flow =
        run_cli("oracle --problem cut -i " + (dir.path / "cutlb.txt").string() + " --cut \"A:0,1 B:3\"", dir.path);
    CHECK(flow.exit_code == 0);
    CHECK(flow.output == "10\n");  // bit 1 planted on the first subset, c = 9
}

TEST_CASE("verify subcommand gates the deterministic problems at zero") {
    TempDir dir;
    CliResult mst = run_cli("verify --problem mst --trials 8 --seed 5", dir.path);
    CHECK(mst.exit_code == 0);
    CHECK(mst.output.find("failures=0") != std::string::npos);
    CliResult path = run_cli("verify --problem path --trials 8 --seed 5", dir.path);
    CHECK(path.exit_code == 0);
}

TEST_CASE("environment seed is honored") {
    TempDir dir;
    write_file(dir.path / "g.txt", "2 2 0\nt 0\nt 1\ne 0 1 1\n");
    std::string base = "build --problem matching -i " + (dir.path / "g.txt").string();
    setenv("DYNSKETCH_SEED", "777", 1);
    REQUIRE(run_cli(base + " -o " + (dir.path / "env.dsk").string(), dir.path).exit_code == 0);
    unsetenv("DYNSKETCH_SEED");
    REQUIRE(run_cli(base + " --seed 777 -o " + (dir.path / "flag.dsk").string(), dir.path).exit_code == 0);
    CHECK(read_bytes(dir.path / "env.dsk") == read_bytes(dir.path / "flag.dsk"));
}
