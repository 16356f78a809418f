// End-to-end checks of the command-line binary: spawn it, capture combined
// output, verify text and exit codes. argv[1] is the binary under test.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::printf("[FAIL] %s\n", what.c_str());
    }
}

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr combined
};

RunResult run(const std::string& cmd) {
    RunResult res;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) {
        expect(false, "popen failed for: " + cmd);
        return res;
    }
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
        res.output.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return text;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: %s <aminrel-binary>\n", argv[0]);
        return 2;
    }
    const std::string bin = argv[1];
    fs::path dir =
        fs::temp_directory_path() / ("aminrel-cli-" + std::to_string(getpid()));
    fs::create_directories(dir);

    fs::path canonical4 = dir / "canonical4.json";
    write_file(canonical4, R"({
      "nodes": 4,
      "arcs": [[1,2],[1,3],[2,3],[2,4],[3,4]],
      "targets": [4]
    })");
    fs::path net5 = dir / "net5.json";
    write_file(net5, R"({
      "nodes": 5,
      "arcs": [[1,2],[1,3],[2,3],[2,5],[3,4]],
      "targets": [4,5]
    })");
    fs::path bad = dir / "bad.json";
    write_file(bad, R"({
      "nodes": 3,
      "arcs": [[1,2],[3,2]],
      "targets": [1]
    })");
    fs::path garbage = dir / "garbage.json";
    write_file(garbage, "{ this is not json");

    // validate: clean fixture passes, semantic problems list and fail.
    {
        RunResult r = run(bin + " validate " + canonical4.string());
        expect(r.exit_code == 0, "validate canonical4 exit: " + r.output);
        expect(contains(r.output, "ok"), "validate canonical4 output");

        r = run(bin + " validate " + bad.string());
        expect(r.exit_code == 1, "validate bad exit code");
        expect(contains(r.output, "(3,2)"), "violation names the arc");
        expect(contains(r.output, "target 1"), "violation names the target");

        r = run(bin + " validate " + garbage.string());
        expect(r.exit_code == 2, "garbage exit code");

        r = run(bin + " validate " + (dir / "missing.json").string());
        expect(r.exit_code == 2, "missing file exit code");
    }

    // rel: single engine, text output.
    {
        RunResult r = run(bin + " rel " + canonical4.string() + " --engine bat");
        expect(r.exit_code == 0, "rel bat exit: " + r.output);
        expect(contains(r.output, "R = 0.46875"), "rel bat R: " + r.output);
        expect(contains(r.output, "feasible = 11"), "rel bat feasible");
        expect(contains(r.output, "visited = 45"), "rel bat visited");
    }

    // rel: all engines agree and report their spread.
    {
        RunResult r = run(bin + " rel " + canonical4.string() + " --engine all");
        expect(r.exit_code == 0, "rel all exit: " + r.output);
        for (const char* e : {"bat", "dfs", "ugfm", "oracle"})
            expect(contains(r.output, std::string("engine: ") + e),
                   std::string("rel all lists ") + e);
        expect(contains(r.output, "max_delta"), "rel all delta line");
    }

    // rel: JSON output parses and carries the reliability.
    {
        RunResult r = run(bin + " rel " + canonical4.string() +
                          " --engine dfs --format json");
        expect(r.exit_code == 0, "rel json exit");
        nlohmann::json doc = nlohmann::json::parse(r.output, nullptr, false);
        expect(!doc.is_discarded(), "rel json parses: " + r.output);
        if (!doc.is_discarded()) {
            expect(doc["engines"].size() == 1, "rel json engine count");
            double rel = doc["engines"][0]["reliability"].get<double>();
            expect(rel == 15.0 / 32.0, "rel json reliability");
        }
    }

    // rel: multi-target buckets and --targets override.
    {
        RunResult r = run(bin + " rel " + net5.string() + " --engine dfs");
        expect(r.exit_code == 0, "rel net5 exit");
        expect(contains(r.output, "R = 0.09375"), "net5 R: " + r.output);
        expect(contains(r.output, "R{4,5} = 0.09375"), "net5 bucket {4,5}");
        expect(contains(r.output, "R{} = 0.53125"), "net5 failure bucket");

        r = run(bin + " rel " + net5.string() +
                " --engine bat --targets 5");
        expect(r.exit_code == 0, "rel override exit");
        expect(contains(r.output, "R = 0.25"), "override R: " + r.output);
    }

    // rel: resource exits — oracle budget and UGFM term cap.
    {
        RunResult r = run(bin + " rel " + canonical4.string() +
                          " --engine oracle --budget 10");
        expect(r.exit_code == 3, "oracle budget exit code");
        expect(contains(r.output, "budget"), "oracle budget message");

        fs::path s8 = dir / "semi8.json";
        RunResult g = run(bin + " gen semi 8 -o " + s8.string());
        expect(g.exit_code == 0, "gen semi 8 exit");
        r = run(bin + " rel " + s8.string() + " --engine ugfm");
        expect(r.exit_code == 3, "ugfm cap exit code: " + r.output);
        expect(contains(r.output, "term cap"), "ugfm cap message");
    }

    // gen: deterministic fixtures that validate cleanly.
    {
        fs::path a = dir / "ra.json";
        fs::path b = dir / "rb.json";
        RunResult r = run(bin + " gen random 7 --seed 9 --dirichlet -o " +
                          a.string());
        expect(r.exit_code == 0, "gen random exit");
        run(bin + " gen random 7 --seed 9 --dirichlet -o " + b.string());
        expect(read_file(a) == read_file(b), "gen random determinism");
        expect(contains(read_file(a), "prob"), "dirichlet emits prob");
        expect(run(bin + " validate " + a.string()).exit_code == 0,
               "generated fixture validates");

        fs::path s5 = dir / "semi5.json";
        run(bin + " gen semi 5 -o " + s5.string());
        expect(!contains(read_file(s5), "prob"), "uniform omits prob");
        expect(run(bin + " validate " + s5.string()).exit_code == 0,
               "semi fixture validates");
    }

    // bench: CSV table with the desk-scale values.
    {
        fs::path csv = dir / "bench.csv";
        RunResult r = run(bin + " bench 5..6 -o " + csv.string());
        expect(r.exit_code == 0, "bench exit: " + r.output);
        std::string text = read_file(csv);
        expect(contains(text,
                        "n,arcs,n_all,n_feasible,reliability,t_bat_s,"
                        "t_ugfm_s,visited_bat,generated_ugfm,delta"),
               "bench CSV header");
        expect(contains(text, "5,10,2295,388,"), "bench row n=5");
        expect(contains(text, "6,15,75735,11164,"), "bench row n=6");

        r = run(bin + " bench 5..5 --format json");
        expect(r.exit_code == 0, "bench json exit");
        nlohmann::json doc = nlohmann::json::parse(r.output, nullptr, false);
        expect(!doc.is_discarded() && doc.is_array() && doc.size() == 1,
               "bench json shape");
    }

    // Partitioned BAT via the environment agrees with the serial default.
    {
        RunResult r = run("AMIN_REL_THREADS=2 " + bin + " rel " +
                          canonical4.string() + " --engine bat");
        expect(r.exit_code == 0, "threaded rel exit");
        expect(contains(r.output, "R = 0.46875"), "threaded rel R");
        expect(contains(r.output, "visited = 45"), "threaded rel visited");
    }

    // Bad invocations are input errors, not crashes.
    {
        expect(run(bin + " frobnicate").exit_code == 2, "unknown subcommand");
        expect(run(bin + " rel").exit_code == 2, "rel without a path");
        expect(run(bin + " rel " + canonical4.string() + " --engine warp")
                       .exit_code == 2,
               "unknown engine");
        expect(run(bin + " --help").exit_code == 0, "--help exits clean");
    }

    fs::remove_all(dir);
    if (g_failures != 0) {
        std::printf("%d CLI check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all CLI checks passed\n");
    return 0;
}
