#include <plateau/io.hpp>

#include <CLI11.hpp>

int main(int argc, char** argv)
{
    CLI::App app{"plateau: a desk-scale laboratory for homological spanning problems"};
    app.require_subcommand(1);

    plateau::ExperimentConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scene", cfg.scene_path, "scene (or sphere) JSON file")->required();
        sub->add_option("--seed", cfg.seed, "64-bit RNG seed (default 0)");
        sub->add_option("--budget", cfg.budget, "move budget for the local search");
        sub->add_option("--mode", cfg.mode, "free|fixed boundary objective")
            ->check(CLI::IsMember({"free", "fixed"}));
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--levels", cfg.levels, "refinement levels");
        sub->add_option("--tol", cfg.tolerance, "numeric tolerance");
    };

    add_common(app.add_subcommand("check", "evaluate the spanning predicates"));
    add_common(app.add_subcommand("minimize", "local-search energy minimization"));
    add_common(app.add_subcommand("refine", "refinement study over halving grids"));
    add_common(app.add_subcommand("lemma24", "weak-limit covering pipeline"));
    add_common(app.add_subcommand("energy-audit", "integrand axiom checks"));
    add_common(app.add_subcommand("sphere", "sphere intersection reductions"));

    CLI11_PARSE(app, argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    return plateau::run(cfg);
}
