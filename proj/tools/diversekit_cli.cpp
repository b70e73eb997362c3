#include <iostream>

#include <CLI11.hpp>

#include "diversekit/cli.hpp"

int main(int argc, char** argv) {
    using namespace diversekit;
    CLI::App app{"Find r diverse solutions of size at most k"};
    std::string problem = "vc", mode = "auto", td, trace;
    RunConfig cfg;
    long long d = 0;
    app.add_option("--problem", problem, "vc, hs, plc or fast")->check(CLI::IsMember({"vc", "hs", "plc", "fast"}));
    app.add_option("--k", cfg.k, "solution size bound")->required();
    app.add_option("--r", cfg.r, "number of solutions")->required();
    app.add_option("--d", d, "diversity target")->required();
    app.add_option("--td", td, "tree decomposition (PACE .td), vc only");
    app.add_option("--mode", mode, "auto, direct, framework or oracle")
        ->check(CLI::IsMember({"auto", "direct", "framework", "oracle"}));
    app.add_flag("--kernelize", cfg.kernelize, "apply the loss-less kernel first");
    app.add_option("--threads", cfg.threads, "worker threads for table evaluation");
    app.add_option("--trace", trace, "write per-node table sizes as CSV");
    app.add_option("input", cfg.input, "instance file")->required();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.problem = *parse_problem(problem);
    cfg.mode = *parse_mode(mode);
    cfg.d = d;
    if (!td.empty()) cfg.td = td;
    if (!trace.empty()) cfg.trace = trace;

    RunResult res = run(cfg);
    if (res.exit_code == 2) {
        std::cerr << "error: " << res.message << '\n';
        return 2;
    }
    std::cout << res.output.dump(2) << '\n';
    std::cerr << res.message << '\n';
    return res.exit_code;
}
