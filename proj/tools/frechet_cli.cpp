// Command-line front end: `frechet_cli run <experiment> [flags]`.
// Exit codes: 0 success, 2 certificate violation, 3 configuration error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "frechet/cli/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCertificate = 2;
constexpr int kExitConfig = 3;

void write_file(const std::filesystem::path& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw frechet::cli::ConfigError("cannot write " + path.string());
    }
    out << body;
}

}  // namespace

int main(int argc, char** argv)
{
    using namespace frechet::cli;

    CLI::App app{"Graded Frechet space experiments"};
    app.require_subcommand(1);
    ExperimentConfig cfg;

    CLI::App* run = app.add_subcommand("run", "Run one experiment and write its report");
    run->add_option("experiment", cfg.experiment, "Experiment name")
        ->required()
        ->check(CLI::IsMember(experiment_names()));
    run->add_option("--depth", cfg.depth, "Truncation depth")->capture_default_str();
    run->add_option("--bandwidth", cfg.bandwidth, "Periodic bandwidth")->capture_default_str();
    run->add_option("--weights", cfg.weights, "geometric:<r> or a comma list")->capture_default_str();
    run->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    run->add_option("--tol", cfg.tol, "Solver tolerance")->capture_default_str();
    run->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
    run->add_option("--format", cfg.format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
    run->add_option("--curve", cfg.curve, "lengths: line:<dir> or affine:<dir>:<dir>")->capture_default_str();
    run->add_option("--map", cfg.map, "ift-solve map")->capture_default_str();
    run->add_option("--target", cfg.target, "ift-solve target, e.g. 0.1e1,0.05e3")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const ExperimentReport rep = run_experiment(cfg);
        const std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        if (cfg.format == "json" || cfg.format == "both") {
            write_file(dir / (cfg.experiment + ".json"), rep.report.dump(2) + "\n");
        }
        if (cfg.format == "csv" || cfg.format == "both") {
            for (const CsvTable& t : rep.tables) {
                write_file(dir / (cfg.experiment + "_" + t.name + ".csv"), to_csv(t));
            }
        }
        std::cout << cfg.experiment << ": "
                  << (rep.certificate_violation ? "certificate violation" : "ok") << "\n";
        return rep.certificate_violation ? kExitCertificate : kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const frechet::CertificateViolation& e) {
        std::cerr << "certificate violation: " << e.what() << "\n";
        return kExitCertificate;
    } catch (const frechet::ContractionViolation& e) {
        std::cerr << "certificate violation: " << e.what() << "\n";
        return kExitCertificate;
    }
}
