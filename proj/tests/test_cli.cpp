#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "weakdwell/config.hpp"
#include "weakdwell/record.hpp"
#include "weakdwell/run.hpp"

using namespace weakdwell;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "weakdwell_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunConfig dwell_config(const std::string& out_name) {
    RunConfig config;
    config.experiment = Experiment::dwell;
    config.params = ParamSet::parse_string("omega = 1\nomega_prime = -1\nT = 1\n");
    config.output_path = (temp_dir() / out_name).string();
    config.format = OutputFormat::json;
    return config;
}

RunConfig sweep_config(const std::string& out_name) {
    RunConfig config;
    config.experiment = Experiment::sweep;
    config.params = ParamSet::parse_string(
        "variable = T\nstart = 0.1\nstop = 20\nsteps = 100\nscale = log\n"
        "omega = 1\nomega_prime = -1\n");
    config.output_path = (temp_dir() / out_name).string();
    config.format = OutputFormat::csv;
    return config;
}

}  // namespace

TEST_CASE("config parser handles comments, blanks and whitespace") {
    const ParamSet params = ParamSet::parse_string(
        "# a comment\n"
        "\n"
        "  omega = 1.5   # trailing comment\n"
        "label= spin-flip\n");
    CHECK(params.get_double("omega") == 1.5);
    CHECK(params.get_string("label") == "spin-flip");
    CHECK(params.get_double_or("missing", 2.0) == 2.0);
}

TEST_CASE("config parser rejects malformed input") {
    CHECK_THROWS_AS(ParamSet::parse_string("omega 1.5\n"), ConfigError);
    CHECK_THROWS_AS(ParamSet::parse_string("= 1\n"), ConfigError);
    CHECK_THROWS_AS(ParamSet::parse_string("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(ParamSet::parse_file("/nonexistent/weakdwell.cfg"), IoError);

    const ParamSet params = ParamSet::parse_string("omega = abc\nsteps = 1.5\n");
    CHECK_THROWS_AS(params.get_double("omega"), ConfigError);
    CHECK_THROWS_AS(params.get_int("steps"), ConfigError);
    CHECK_THROWS_AS(params.get_string("nope"), ConfigError);
}

TEST_CASE("validation names the offending key") {
    RunConfig config = dwell_config("unused.json");
    config.params = ParamSet::parse_string("omega = 1\nomega_prime = 3\nT = 1\n");
    try {
        validate_run_config(config);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("omega_prime") != std::string::npos);
    }

    config.params = ParamSet::parse_string("omega = 1\nT = 1\n");
    try {
        validate_run_config(config);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("omega_prime") != std::string::npos);
    }

    config.params = ParamSet::parse_string("omega = 1\nomega_prime = -1\nT = 1\ntypo = 2\n");
    try {
        validate_run_config(config);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("typo") != std::string::npos);
    }

    config.experiment = Experiment::pointer_sim;
    config.params = ParamSet::parse_string(
        "pre = x+\npost = theta:abc\nop = sigma_z\ng = 0.05\ndelta = 1\n"
        "q_min = -12\nq_max = 12\nn_points = 256\n");
    try {
        validate_run_config(config);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("post") != std::string::npos);
    }
}

TEST_CASE("csv emitter writes header-only files for empty tables") {
    Table table;
    table.columns = {"a", "b"};
    CHECK(render_csv(table) == "a,b\n");
}

TEST_CASE("csv emitter round-trips doubles exactly") {
    Table table;
    table.columns = {"x", "y"};
    table.rows.push_back({0.1 + 0.2, 1.0 / 3.0});
    table.rows.push_back({-1.2345678912345678e-101, 9.87654321e300});

    const fs::path path = temp_dir() / "roundtrip.csv";
    emit_csv(table, path.string());
    const std::string text = read_file(path);

    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y");
    for (const Row& row : table.rows) {
        REQUIRE(std::getline(in, line));
        const std::size_t comma = line.find(',');
        CHECK(std::strtod(line.substr(0, comma).c_str(), nullptr) == std::get<double>(row[0]));
        CHECK(std::strtod(line.substr(comma + 1).c_str(), nullptr) == std::get<double>(row[1]));
    }
}

TEST_CASE("tables must stay homogeneous") {
    Table table;
    table.columns = {"a", "b"};
    table.rows.push_back({1.0});
    CHECK_THROWS_AS(render_csv(table), DomainError);
}

TEST_CASE("dwell run emits the expected flat json record") {
    RunConfig config = dwell_config("dwell_record.json");
    RunOptions options;
    options.include_metadata = false;
    run(config, options);
    const std::string text = read_file(config.output_path);
    const auto parsed = nlohmann::json::parse(text);
    CHECK(parsed.is_object());
    CHECK(std::abs(parsed.at("tau_quadrature").get<double>() - 0.37048) < 1e-4);
    CHECK(parsed.at("outcome").get<std::string>() == "dissipative");
    CHECK(parsed.contains("tau_coth_paper"));
    CHECK(parsed.contains("relative_discrepancy"));
    CHECK(parsed.contains("coth_exceeds_window"));
}

TEST_CASE("dissipationless dwell run reports the limit record") {
    RunConfig config = dwell_config("dwell_limit.json");
    config.params = ParamSet::parse_string("omega = 1\nomega_prime = 2\nT = 3\n");
    RunOptions options;
    options.include_metadata = false;
    run(config, options);
    const auto parsed = nlohmann::json::parse(read_file(config.output_path));
    CHECK(parsed.at("outcome").get<std::string>() == "dissipationless");
    CHECK(parsed.at("tau_limit").get<double>() == 1.5);
}

TEST_CASE("sweep output is deterministic across runs and worker counts") {
    RunConfig config = sweep_config("sweep_a.csv");
    RunOptions options;
    options.include_metadata = false;
    options.workers = 1;
    run(config, options);
    const std::string first = read_file(config.output_path);

    config.output_path = (temp_dir() / "sweep_b.csv").string();
    run(config, options);
    CHECK(read_file(config.output_path) == first);

    config.output_path = (temp_dir() / "sweep_c.csv").string();
    options.workers = 4;
    run(config, options);
    CHECK(read_file(config.output_path) == first);

    // 100 log-spaced rows, tau_quadrature increasing with T (within the
    // 1e-10 quadrature tolerance once the curve saturates at 1/gamma)
    std::istringstream in(first);
    std::string line;
    std::getline(in, line);
    CHECK(line == "T,gamma,tau_quadrature,tau_tanh,tau_coth_paper");
    int rows = 0;
    double prev_tau = 0.0;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(fields, cell, ',')) values.push_back(std::strtod(cell.c_str(), nullptr));
        REQUIRE(values.size() == 5);
        CHECK(values[2] > prev_tau - 2e-10);
        prev_tau = values[2];
    }
    CHECK(rows == 100);
}

TEST_CASE("metadata echoes the run while the data section stays fixed") {
    RunConfig config = dwell_config("dwell_meta.csv");
    config.format = OutputFormat::csv;
    run(config, {});
    const std::string text = read_file(config.output_path);
    CHECK(text.find("# tool: weakdwell") != std::string::npos);
    CHECK(text.find("# experiment: dwell") != std::string::npos);
    CHECK(text.find("# config.omega: 1") != std::string::npos);
    CHECK(text.find("# wall_time_s:") != std::string::npos);

    // data section below the metadata is byte-identical across runs
    auto data_section = [](const std::string& s) {
        std::istringstream in(s);
        std::string line, data;
        while (std::getline(in, line))
            if (line.rfind("#", 0) != 0) data += line + "\n";
        return data;
    };
    config.output_path = (temp_dir() / "dwell_meta2.csv").string();
    run(config, {});
    CHECK(data_section(text) == data_section(read_file(config.output_path)));
}

TEST_CASE("invalid configs fail fast without touching the output file") {
    RunConfig config = dwell_config("never_written.json");
    config.params = ParamSet::parse_string("omega = 1\nomega_prime = 3\nT = 1\n");
    std::error_code ec;
    fs::remove(config.output_path, ec);
    CHECK_THROWS_AS(run(config, {}), ConfigError);
    CHECK_FALSE(fs::exists(config.output_path));
}

TEST_CASE("missing output path is a config error") {
    RunConfig config = dwell_config("x.json");
    config.output_path.clear();
    CHECK_THROWS_AS(validate_run_config(config), ConfigError);
}

TEST_CASE("survival and bath and pointer experiments produce their contracted columns") {
    RunOptions options;
    options.include_metadata = false;

    RunConfig survival;
    survival.experiment = Experiment::survival;
    survival.params = ParamSet::parse_string(
        "kind = finite_time\nk = 0\ngamma = 1\nt_i = 0\nt_f = 2\nsamples = 5\n");
    survival.output_path = (temp_dir() / "survival.csv").string();
    run(survival, options);
    std::string text = read_file(survival.output_path);
    CHECK(text.rfind("t,re_pw,im_pw,abs_pw\n", 0) == 0);
    // first row is the t_i boundary: P_w = 1
    CHECK(text.find("\n0,1,0,1\n") != std::string::npos);

    RunConfig bath;
    bath.experiment = Experiment::bath_sim;
    bath.params = ParamSet::parse_string(
        "n_levels = 10\ndelta_e = 0.2\ncoupling = 0.05\nt_max = 1\ndt = 0.01\n"
        "store_stride = 10\n");
    bath.output_path = (temp_dir() / "bath.csv").string();
    run(bath, options);
    text = read_file(bath.output_path);
    CHECK(text.rfind("t,re_a0,im_a0,norm_total,abs_a0\n", 0) == 0);

    RunConfig pointer;
    pointer.experiment = Experiment::pointer_sim;
    pointer.params = ParamSet::parse_string(
        "pre = x+\npost = theta:0.4\nop = sigma_z\ng = 0.05\ndelta = 1\n"
        "q_min = -12\nq_max = 12\nn_points = 256\n");
    pointer.output_path = (temp_dir() / "pointer.csv").string();
    run(pointer, options);
    text = read_file(pointer.output_path);
    CHECK(text.rfind("q,re,im,prob\n", 0) == 0);
}

TEST_CASE("exit codes map the error taxonomy") {
    CHECK(exit_code_for(ConfigError("x")) == 2);
    CHECK(exit_code_for(IoError("x")) == 4);
    CHECK(exit_code_for(DomainError("x")) == 3);
    CHECK(exit_code_for(StepTooLarge("x")) == 3);
    CHECK(exit_code_for(QuadratureNonConvergence("x")) == 3);
}

#ifdef WEAKDWELL_CLI_PATH
TEST_CASE("binary honors the exit-code contract") {
    const fs::path dir = temp_dir();
    auto run_cli = [&](const std::string& args) {
        const std::string cmd =
            std::string("\"") + WEAKDWELL_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WEXITSTATUS(status);
    };

    const fs::path good = dir / "good.cfg";
    std::ofstream(good) << "omega = 1\nomega_prime = -1\nT = 1\n";
    const fs::path bad_domain = dir / "bad_domain.cfg";
    std::ofstream(bad_domain) << "n_levels = 4000\ndelta_e = 0.01\ncoupling = 0.02\n"
                                 "t_max = 1\ndt = 0.5\n";  // trips the step-size guard
    const fs::path bad_key = dir / "bad_key.cfg";
    std::ofstream(bad_key) << "omega = 1\nomega_prime = 3\nT = 1\n";

    CHECK(run_cli("dwell --config \"" + good.string() + "\" --out \"" +
                  (dir / "ok.csv").string() + "\"") == 0);
    CHECK(run_cli("dwell --config \"" + bad_key.string() + "\" --out \"" +
                  (dir / "never.csv").string() + "\"") == 2);
    CHECK(run_cli("dwell --config \"" + good.string() + "\"") == 2);  // no output path
    CHECK(run_cli("bath-sim --config \"" + bad_domain.string() + "\" --out \"" +
                  (dir / "never2.csv").string() + "\"") == 3);
    CHECK(run_cli("dwell --config \"" + good.string() + "\" --out /nonexistent_dir/out.csv") ==
          4);
    CHECK(run_cli("dwell --config \"" + (dir / "missing.cfg").string() + "\" --out \"" +
                  (dir / "never3.csv").string() + "\"") == 4);  // unreadable config
}
#endif

TEST_CASE("io failures surface as IoError") {
    RunConfig config = dwell_config("unused2.json");
    config.output_path = "/nonexistent_dir/weakdwell_out.json";
    CHECK_THROWS_AS(run(config, {}), IoError);
}
