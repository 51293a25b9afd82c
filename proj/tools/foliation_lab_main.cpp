#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "folab/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"foliation-lab: invariants of singular holomorphic foliations in the plane"};
    app.require_subcommand(1);

    folab::JobSpec job;
    std::string order_str;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", job.input_path, "foliation 1-form file")->required();
        sub->add_option("--order", job.order, "jet truncation order (overrides config)");
        sub->add_option("--config", job.config_path, "flat key = value config file");
        sub->add_option("--out", job.out_path, "write the JSON report here (stdout otherwise)");
    };

    CLI::App* reduce = app.add_subcommand("reduce", "Seidenberg desingularization and indices");
    add_common(reduce);
    CLI::App* holonomy = app.add_subcommand("holonomy", "holonomy jets and multiplier checks");
    add_common(holonomy);
    CLI::App* sliding = app.add_subcommand("sliding", "sliding set of a foliation/fibration pair");
    add_common(sliding);
    sliding->add_option("--fibration", job.fibration_path, "fibration 1-form file")->required();
    CLI::App* compare = app.add_subcommand("compare", "jet comparison of two sliding sets");
    add_common(compare);
    compare->add_option("--input2", job.input2_path, "second foliation")->required();
    compare->add_option("--fibration", job.fibration_path, "fibration for the first foliation")
        ->required();
    compare->add_option("--fibration2", job.fibration2_path,
                        "fibration for the second foliation (defaults to --fibration)");
    CLI::App* flows = app.add_subcommand("flows-check", "exp-flow identity battery");
    add_common(flows);
    flows->add_option("--fibration", job.fibration_path, "fibration 1-form file")->required();

    CLI11_PARSE(app, argc, argv);
    job.command = app.get_subcommands().front()->get_name();

    try {
        folab::RunResult res = folab::run(job);
        if (!job.out_path) std::cout << res.report_json;
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
