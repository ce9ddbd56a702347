// End-to-end checks of the rabitherm executable.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int status;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(RABITHERM_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Cli, QuasitempGridSizeAndHeader) {
    const auto r = run("quasitemp --omega 0.1:2:7 --f 0.3,3");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(first_line(r.out).rfind("series,index,omega0,omega,f,beta,regime", 0), 0u);
    // 14 surface rows plus marker rows.
    std::istringstream in(r.out);
    std::string line;
    std::size_t surface = 0;
    while (std::getline(in, line)) surface += line.rfind("surface,", 0) == 0;
    EXPECT_EQ(surface, 14u);
}

TEST(Cli, SinglePointGivesOneRecord) {
    const auto r = run("magnetization --j 1 --omega 1.5 --f 2 --beta 1");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(count_lines(r.out), 2u);
    EXPECT_NE(r.out.find("-0.183472838004447"), std::string::npos);
}

TEST(Cli, ThreadCountDoesNotChangeBytes) {
    const std::string args = "dissipation --s 1/2,10 --omega 0.2:3:40 --f 0.1:2:20";
    const auto a = run("--threads 1 " + args);
    const auto b = run("--threads 4 " + args);
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifyIsDeterministicAndPasses) {
    const auto a = run("--seed 7 --threads 2 verify --points 4");
    const auto b = run("--seed 7 --threads 2 verify --points 4");
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(count_lines(a.out), 15u);
    EXPECT_EQ(a.out.find(",0\n"), std::string::npos);
}

TEST(Cli, VerifyFailureExitCode) {
    EXPECT_EQ(run("verify --points 2 --tol-scale 0").status, 2);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("bogus").status, 1);
    EXPECT_EQ(run("quasitemp --omega 0:1:1").status, 1);
    EXPECT_EQ(run("quasitemp --omega -1").status, 1);
    EXPECT_EQ(run("--format xml quasitemp").status, 1);
    EXPECT_EQ(run("--config /nonexistent/file.ini quasitemp").status, 1);
    EXPECT_EQ(run("magnetization --j 1/3").status, 1);
}

TEST(Cli, JsonlOutput) {
    const auto r = run("--format jsonl dissipation --s 1 --omega 1 --f 0.5 --beta 2");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.front(), '{');
    EXPECT_NE(r.out.find("\"series\":\"surface\""), std::string::npos);
}

TEST(Cli, ConfigFileAndCommandLinePrecedence) {
    const std::string path = ::testing::TempDir() + "rabitherm_cli_cfg.ini";
    {
        std::ofstream out(path);
        out << "j = 1\nomega = 1.5\nf = 2\nbeta = 5\n";
    }
    const auto from_cfg = run("--config " + path + " magnetization --beta 1");
    const auto direct = run("magnetization --j 1 --omega 1.5 --f 2 --beta 1");
    ASSERT_EQ(from_cfg.status, 0);
    EXPECT_EQ(from_cfg.out, direct.out);
    std::remove(path.c_str());
}

TEST(Cli, BoundaryPointsNeedFlag) {
    // omega_c = (F^2 + omega0^2)/(2 omega0) = 1.625 for F = 1.5.
    const auto dropped = run("quasitemp --omega 1.625 --f 1.5");
    const auto kept = run("--allow-boundary quasitemp --omega 1.625 --f 1.5");
    ASSERT_EQ(dropped.status, 0);
    ASSERT_EQ(kept.status, 0);
    EXPECT_EQ(dropped.out.find("surface,"), std::string::npos);
    EXPECT_NE(kept.out.find("surface,0,"), std::string::npos);
}

TEST(Cli, OutputFile) {
    const std::string path = ::testing::TempDir() + "rabitherm_cli_out.csv";
    ASSERT_EQ(run("--out " + path + " classical --omega 0.9,1.1").status, 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(count_lines(ss.str()), 3u);
    std::remove(path.c_str());
}
