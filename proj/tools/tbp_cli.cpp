// Command-line front end: search, hessian, tumanov, all.

#include <iostream>

#include "CLI11.hpp"
#include "tbp/runner.hpp"

int main(int argc, char** argv) {
    tbp::RunConfig cfg;
    CLI::App app{"Certification runs for the five-point energy problem"};
    app.add_option("--task", cfg.task, "search | hessian | tumanov | all")->check(CLI::IsMember({"search", "hessian", "tumanov", "all"}));
    app.add_option("--potential", cfg.potential, "g2..g6, g10#, or all");
    app.add_option("--case", cfg.tumanov_case, "Tumanov case: 1, 2, 3 or all")->check(CLI::IsMember({"1", "2", "3", "all"}));
    app.add_flag("--extended", cfg.extended, "case 3 up to s = 13 + 1/16");
    app.add_option("--scale-log2", cfg.scale_log2, "override log2 of the integer scale S");
    app.add_option("--epsilon-log2", cfg.epsilon0_log2, "override log2 of eps0");
    app.add_option("--threads", cfg.thread_count, "worker threads (default: TBP_THREADS or 1)")->check(CLI::NonNegativeNumber);
    app.add_option("--checkpoint", cfg.checkpoint_path, "frontier checkpoint file");
    app.add_option("--checkpoint-every", cfg.checkpoint_every, "blocks between checkpoint flushes");
    app.add_flag("--resume", cfg.resume, "resume from --checkpoint");
    app.add_option("--subregion", cfg.subregion, "block code restricting the search");
    app.add_option("--report", cfg.report_path, "write the JSON report here (atomically)");
    app.add_option("--max-blocks", cfg.max_blocks, "stop after this many graded blocks (0 = no limit)");
    app.add_option("--pd-budget", cfg.pd_budget, "node-expansion budget for positive dominance");
    app.add_flag("--confirm-long", cfg.confirm_long, "allow the multi-day G10# search");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // --help exits 0
    }

    try {
        const auto r = tbp::run(cfg);
        std::cout << r.report.dump(2) << std::endl;
        if (r.exit_code != 0) std::cerr << "failed stage: " << r.failed_stage << std::endl;
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
