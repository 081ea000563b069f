#include "waybound/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "waybound/conservation.hpp"
#include "waybound/errors.hpp"
#include "waybound/gates.hpp"
#include "waybound/measurement.hpp"
#include "waybound/optimizer.hpp"
#include "waybound/qcore.hpp"
#include "waybound/serialization.hpp"

namespace waybound {

namespace {

namespace fs = std::filesystem;

constexpr double kReportMargin = 1e-6; // achieved-below-bound threshold for exit code 1

void parallel_for(std::size_t total, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs == 1 || total < 2) {
        for (std::size_t i = 0; i < total; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            try {
                body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> workers;
    const std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(jobs), total);
    workers.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) workers.emplace_back(worker);
    for (auto& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

/// Collects a command's output files, then writes the manifest last so a
/// manifest's presence implies the listed outputs are complete. Timestamps
/// and wall time appear only here, never in report bodies.
class CommandRun {
  public:
    CommandRun(std::string command, const std::string& out_dir, Json effective_config,
               std::uint64_t seed)
        : command_(std::move(command)),
          out_dir_(out_dir),
          config_(std::move(effective_config)),
          seed_(seed),
          started_(std::chrono::steady_clock::now()) {
        fs::create_directories(out_dir_);
    }

    void write_report(const std::string& name, const Json& body) {
        write_json_atomic(out_dir_ / name, body);
        outputs_.push_back(name);
    }

    void write_table(const std::string& name, const std::string& csv) {
        write_text_atomic(out_dir_ / name, csv);
        outputs_.push_back(name);
    }

    void finish() {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
        const Json manifest{{"command", command_},
                            {"config_digest", config_digest(config_)},
                            {"seed", seed_},
                            {"tool_version", kToolVersion},
                            {"wall_time_seconds", wall},
                            {"outputs", outputs_},
                            {"timestamp", utc_timestamp()}};
        write_json_atomic(out_dir_ / "manifest.json", manifest);
    }

  private:
    std::string command_;
    fs::path out_dir_;
    Json config_;
    std::uint64_t seed_;
    std::chrono::steady_clock::time_point started_;
    std::vector<std::string> outputs_;
};

long long json_int(const Json& j, const char* key, long long fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) {
        throw ContractError(std::string("config key \"") + key + "\" must be an integer");
    }
    return j[key].get<long long>();
}

RandomCaseDims dims_from_config(const Json& config) {
    RandomCaseDims dims;
    dims.object_min = static_cast<Index>(json_int(config, "object_min", dims.object_min));
    dims.object_max = static_cast<Index>(json_int(config, "object_max", dims.object_max));
    dims.apparatus_min = static_cast<Index>(json_int(config, "apparatus_min", dims.apparatus_min));
    dims.apparatus_max = static_cast<Index>(json_int(config, "apparatus_max", dims.apparatus_max));
    if (dims.object_min < 2 || dims.object_max < dims.object_min || dims.apparatus_min < 2 ||
        dims.apparatus_max < dims.apparatus_min || dims.object_max > 64 ||
        dims.apparatus_max > 64) {
        throw ContractError("dimension ranges must satisfy 2 <= min <= max <= 64");
    }
    return dims;
}

Json dims_to_json(const RandomCaseDims& dims) {
    return Json{{"object_min", dims.object_min},
                {"object_max", dims.object_max},
                {"apparatus_min", dims.apparatus_min},
                {"apparatus_max", dims.apparatus_max}};
}

struct SuiteOptions {
    int count = 100;
    std::uint64_t seed = 0;
    std::string out = ".";
    int jobs = 1;
    std::string config_path;
};

Json load_config(const std::string& path) {
    if (path.empty()) return Json::object();
    const Json config = read_json(path);
    if (!config.is_object()) throw ContractError("config must be a JSON object: " + path);
    return config;
}

int run_uup_suite(const SuiteOptions& opt) {
    const Json config = load_config(opt.config_path);
    const RandomCaseDims dims = dims_from_config(config);
    const Json effective{
        {"command", "uup-suite"}, {"count", opt.count}, {"seed", opt.seed}, {"dims", dims_to_json(dims)}};
    CommandRun run("uup-suite", opt.out, effective, opt.seed);

    const std::size_t total = static_cast<std::size_t>(opt.count);
    std::vector<double> slack(total);
    std::vector<Json> failures(total); // stays null where the relation holds
    parallel_for(total, opt.jobs, [&](std::size_t i) {
        UupCase c = random_uup_case(dims, opt.seed, i);
        const RelationReport report = check_uup(c.model, c.a, c.b, c.psi);
        slack[i] = report.slack;
        if (!report.holds) {
            failures[i] = Json{{"index", i},
                               {"case", Json{{"model", to_json(c.model)},
                                             {"a", to_json(c.a)},
                                             {"b", to_json(c.b)},
                                             {"psi", to_json(c.psi)}}},
                               {"report", to_json(report)}};
        }
    });

    double min_slack = std::numeric_limits<double>::infinity();
    Json failure_list = Json::array();
    for (std::size_t i = 0; i < total; ++i) {
        min_slack = std::min(min_slack, slack[i]);
        if (!failures[i].is_null()) failure_list.push_back(std::move(failures[i]));
    }
    const auto fail = static_cast<long long>(failure_list.size());
    const Json report{{"command", "uup-suite"},
                      {"count", opt.count},
                      {"dims", dims_to_json(dims)},
                      {"seed", opt.seed},
                      {"pass", opt.count - fail},
                      {"fail", fail},
                      {"min_slack", min_slack},
                      {"failures", failure_list}};
    run.write_report("uup_report.json", report);
    run.finish();
    return fail == 0 ? 0 : 1;
}

int run_way_suite(const SuiteOptions& opt) {
    const Json config = load_config(opt.config_path);
    const RandomCaseDims dims = dims_from_config(config);
    const Json effective{
        {"command", "way-suite"}, {"count", opt.count}, {"seed", opt.seed}, {"dims", dims_to_json(dims)}};
    CommandRun run("way-suite", opt.out, effective, opt.seed);

    const std::size_t total = static_cast<std::size_t>(opt.count);
    std::vector<std::optional<double>> slack(total);
    std::vector<Json> failures(total);
    std::vector<Json> rejections(total);
    parallel_for(total, opt.jobs, [&](std::size_t i) {
        ConservingCase c = random_conserving_case(dims, opt.seed, i);
        try {
            const RelationReport report = verify_way(c.model, c.a, c.charge, c.psi);
            slack[i] = report.slack;
            if (!report.holds) {
                failures[i] = Json{{"index", i},
                                   {"case", Json{{"model", to_json(c.model)},
                                                 {"charge", to_json(c.charge)},
                                                 {"a", to_json(c.a)},
                                                 {"psi", to_json(c.psi)}}},
                                   {"report", to_json(report)}};
            }
        } catch (const ContractError& e) {
            // Precondition rejection (conservation or meter compatibility),
            // reported separately and not counted as a bound failure.
            rejections[i] = Json{{"index", i}, {"message", e.what()}};
        }
    });

    std::optional<double> min_slack;
    Json failure_list = Json::array();
    Json rejection_list = Json::array();
    long long verified = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (slack[i]) {
            ++verified;
            min_slack = min_slack ? std::min(*min_slack, *slack[i]) : *slack[i];
        }
        if (!failures[i].is_null()) failure_list.push_back(std::move(failures[i]));
        if (!rejections[i].is_null()) rejection_list.push_back(std::move(rejections[i]));
    }
    const auto fail = static_cast<long long>(failure_list.size());
    const Json report{{"command", "way-suite"},
                      {"count", opt.count},
                      {"dims", dims_to_json(dims)},
                      {"seed", opt.seed},
                      {"pass", verified - fail},
                      {"fail", fail},
                      {"rejected", static_cast<long long>(rejection_list.size())},
                      {"min_slack", min_slack ? Json(*min_slack) : Json()},
                      {"failures", failure_list},
                      {"rejections", rejection_list}};
    run.write_report("way_report.json", report);
    run.finish();
    return fail == 0 ? 0 : 1;
}

struct BoundsOptions {
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::string config_path;
};

std::vector<double> real_list(const Json& config, const char* key, std::vector<double> fallback) {
    if (!config.contains(key)) return fallback;
    const Json& j = config[key];
    if (!j.is_array()) throw ContractError(std::string("config key \"") + key + "\" must be a list");
    std::vector<double> values;
    for (const auto& item : j) {
        if (!item.is_number()) {
            throw ContractError(std::string("config key \"") + key + "\" must list numbers");
        }
        values.push_back(item.get<double>());
    }
    return values;
}

std::vector<int> int_list(const Json& config, const char* key, std::vector<int> fallback) {
    if (!config.contains(key)) return fallback;
    const Json& j = config[key];
    if (!j.is_array()) throw ContractError(std::string("config key \"") + key + "\" must be a list");
    std::vector<int> values;
    for (const auto& item : j) {
        if (!item.is_number_integer()) {
            throw ContractError(std::string("config key \"") + key + "\" must list integers");
        }
        values.push_back(item.get<int>());
    }
    return values;
}

int run_hadamard_bounds(const BoundsOptions& opt) {
    const Json config = load_config(opt.config_path);
    const std::vector<double> coherent = real_list(config, "coherent", {0.0, 1.0, 4.0});
    const std::vector<int> number = int_list(config, "number", {0});
    const std::vector<int> entangled = int_list(config, "entangled", {1, 2, 3, 4});
    const std::vector<int> separable = int_list(config, "separable", {1, 2, 3, 4});

    std::optional<OptimizerConfig> optimize;
    if (config.contains("optimize")) {
        OptimizerConfig oc = optimizer_config_from_json(config["optimize"]);
        if (opt.seed) oc.seed = *opt.seed;
        optimize = oc;
    }
    const std::uint64_t seed = optimize ? optimize->seed : opt.seed.value_or(0);

    Json effective{{"command", "hadamard-bounds"},
                   {"coherent", coherent},
                   {"number", number},
                   {"entangled", entangled},
                   {"separable", separable},
                   {"optimize", optimize ? to_json(*optimize) : Json()}};
    CommandRun run("hadamard-bounds", opt.out, effective, seed);

    // Optimized rows use the variance-extremal preparation of their class, so
    // the class bound and the scenario's general bound coincide. Coherent
    // rows stay analytic; the `optimize` command covers bosonic scenarios.
    const auto achieve = [&](const AncillaSpec& ancilla, bool allow_state_search) {
        OptimizerConfig oc = *optimize;
        if (!allow_state_search) oc.optimize_ancilla = false;
        return minimize_gate_error(ancilla, oc).best_value;
    };

    std::vector<BoundTableRow> rows;
    for (const double mean_n : coherent) {
        rows.push_back({"coherent", mean_n, bound_coherent(mean_n), std::nullopt, std::nullopt});
    }
    for (const int k : number) {
        BoundTableRow row{"number", static_cast<double>(k), bound_general(0.0), std::nullopt,
                          std::nullopt};
        if (optimize) {
            const int cutoff = k + 2;
            const AncillaSpec ancilla = BosonAncilla{cutoff, basis_state(cutoff + 1, k)};
            row.achieved = achieve(ancilla, false);
            row.slack = *row.achieved - row.bound;
        }
        rows.push_back(std::move(row));
    }
    for (const int n : entangled) {
        BoundTableRow row{"entangled", static_cast<double>(n), bound_entangled_spins(n),
                          std::nullopt, std::nullopt};
        if (optimize) {
            const AncillaSpec ancilla = SpinAncilla{n, max_variance_spin_state(n), false};
            row.achieved = achieve(ancilla, true);
            row.slack = *row.achieved - row.bound;
        }
        rows.push_back(std::move(row));
    }
    for (const int n : separable) {
        BoundTableRow row{"separable", static_cast<double>(n), bound_separable_spins(n),
                          std::nullopt, std::nullopt};
        if (optimize) {
            const AncillaSpec ancilla = SpinAncilla{n, product_spin_state(n), true};
            row.achieved = achieve(ancilla, false);
            row.slack = *row.achieved - row.bound;
        }
        rows.push_back(std::move(row));
    }

    run.write_table("hadamard_bounds.csv", bound_table_csv(rows));
    run.finish();
    for (const auto& row : rows) {
        if (row.achieved && *row.achieved < row.bound - kReportMargin) return 1;
    }
    return 0;
}

struct OptimizeOptions {
    std::string config_path;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
};

int run_optimize(const OptimizeOptions& opt) {
    const Json config = load_config(opt.config_path);
    if (!config.contains("scenario")) throw ContractError("optimize config needs a \"scenario\"");
    const Json& scenario = config["scenario"];
    if (!scenario.is_object() || !scenario.contains("ancilla") ||
        !scenario.contains("implementation")) {
        throw ContractError("scenario needs \"ancilla\" and \"implementation\"");
    }
    const AncillaSpec ancilla = ancilla_from_json(scenario["ancilla"]);
    OptimizerConfig oc;
    if (config.contains("optimizer")) oc = optimizer_config_from_json(config["optimizer"]);
    if (opt.seed) oc.seed = *opt.seed;

    bool custom_charge = false;
    HermitianOperator charge = gate_conserved_charge(ancilla);
    if (config.contains("charge")) {
        const Json& spec = config["charge"];
        if (spec == "identity") {
            charge = identity_operator(2 * ancilla_dimension(ancilla));
            custom_charge = true;
        } else if (spec.is_object()) {
            charge = hermitian_from_json(spec);
            custom_charge = true;
        } else if (spec != "conserved") {
            throw ContractError("charge must be \"conserved\", \"identity\", or an operator");
        }
    }

    const Json effective{{"command", "optimize"},
                         {"scenario", scenario},
                         {"optimizer", to_json(oc)},
                         {"charge", config.contains("charge") ? config["charge"] : Json("conserved")}};
    CommandRun run("optimize", opt.out, effective, oc.seed);

    const Json& implementation = scenario["implementation"];
    std::optional<OptimizationResult> result;
    if (implementation == "optimize") {
        if (scenario.contains("input_state")) {
            throw ContractError("optimization always evaluates the canonical +y input; "
                                "drop \"input_state\" or provide an implementation");
        }
        result = minimize_gate_error(ancilla, charge, oc);
    } else if (implementation.is_object()) {
        UnitaryOperator u = unitary_from_json(implementation);
        const Matrix& cm = charge.matrix();
        const double defect = (u.matrix() * cm - cm * u.matrix()).norm();
        if (defect > kUnitaryFrobeniusTol) {
            throw ContractError("provided implementation does not conserve the charge, "
                                "||[U, C]||_F = " + std::to_string(defect));
        }
        const QuantumState input = scenario.contains("input_state")
                                       ? state_from_json(scenario["input_state"])
                                       : default_input_state();
        const double value = gate_error_probability(u, ancilla, input);
        result = OptimizationResult{std::move(u), value, 0, 0, true, oc.seed,
                                    ancilla_state(ancilla)};
    } else {
        throw ContractError("implementation must be \"optimize\" or an operator");
    }

    // The applicable analytic floor, skipped for custom charges (where no
    // conservation bound is claimed).
    std::optional<double> bound;
    std::string bound_label;
    if (!custom_charge) {
        if (const auto* spins = std::get_if<SpinAncilla>(&ancilla)) {
            if (spins->count == 0) {
                bound = bound_general(0.0);
                bound_label = "general";
            } else if (spins->separable && !oc.optimize_ancilla) {
                bound = bound_separable_spins(spins->count);
                bound_label = "separable";
            } else {
                bound = bound_entangled_spins(spins->count);
                bound_label = "entangled";
            }
        } else {
            const auto& boson = std::get<BosonAncilla>(ancilla);
            // State search can migrate toward the variance-maximal state, so
            // only the cutoff-level worst case stays valid there.
            const double sigma = oc.optimize_ancilla
                                     ? boson.cutoff / 2.0
                                     : std_dev(number_operator(boson.cutoff), boson.field_state);
            bound = bound_general(sigma);
            bound_label = "general";
        }
    }

    Json body{{"command", "optimize"},
              {"result", to_json(*result)},
              {"bound", bound ? Json(*bound) : Json()},
              {"bound_label", bound ? Json(bound_label) : Json()},
              {"slack", bound ? Json(result->best_value - *bound) : Json()}};
    run.write_report("optimize_result.json", body);
    run.finish();
    if (bound && result->best_value < *bound - kReportMargin) return 1;
    return 0;
}

struct ExhibitOptions {
    std::uint64_t seed = 0;
    int trials = 1000;
    std::string out = ".";
    std::string config_path;
};

int run_exhibit_violation(const ExhibitOptions& opt) {
    const Json config = load_config(opt.config_path);
    const Index object_dim = static_cast<Index>(json_int(config, "object_dim", 2));
    const Index apparatus_dim = static_cast<Index>(json_int(config, "apparatus_dim", 2));
    const Json effective{{"command", "exhibit-violation"},
                         {"seed", opt.seed},
                         {"trials", opt.trials},
                         {"object_dim", object_dim},
                         {"apparatus_dim", apparatus_dim}};
    CommandRun run("exhibit-violation", opt.out, effective, opt.seed);

    std::vector<ViolationExhibit> exhibits;
    exhibits.push_back(projective_sz_exhibit());
    std::vector<ViolationExhibit> found =
        violation_search(object_dim, apparatus_dim, opt.trials, opt.seed);
    for (auto& e : found) exhibits.push_back(std::move(e));

    bool all_uup_hold = true;
    Json exhibit_list = Json::array();
    for (const auto& e : exhibits) {
        all_uup_hold = all_uup_hold && e.uup.holds;
        exhibit_list.push_back(to_json(e));
    }
    const Json report{{"command", "exhibit-violation"},
                      {"seed", opt.seed},
                      {"trials", opt.trials},
                      {"object_dim", object_dim},
                      {"apparatus_dim", apparatus_dim},
                      {"count", static_cast<long long>(exhibits.size())},
                      {"exhibits", exhibit_list}};
    run.write_report("exhibits.json", report);
    run.finish();
    return all_uup_hold ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Noise-disturbance relations and conserved-charge gate bounds"};
    app.name("waybound");
    app.require_subcommand(1);
    int code = 0;

    SuiteOptions uup_opt;
    auto* uup = app.add_subcommand(
        "uup-suite", "Check the universal noise-disturbance trade-off on seeded random models");
    uup->add_option("--count", uup_opt.count, "number of random cases")
        ->check(CLI::Range(1, 10000000));
    uup->add_option("--seed", uup_opt.seed, "suite seed");
    uup->add_option("--out", uup_opt.out, "output directory");
    uup->add_option("--jobs", uup_opt.jobs, "worker threads")->check(CLI::Range(1, 256));
    uup->add_option("--config", uup_opt.config_path, "JSON file with dimension ranges");
    uup->callback([&] { code = run_uup_suite(uup_opt); });

    SuiteOptions way_opt;
    auto* way = app.add_subcommand(
        "way-suite", "Check the conservation-induced noise floor on conserving random models");
    way->add_option("--count", way_opt.count, "number of random cases")
        ->check(CLI::Range(1, 10000000));
    way->add_option("--seed", way_opt.seed, "suite seed");
    way->add_option("--out", way_opt.out, "output directory");
    way->add_option("--jobs", way_opt.jobs, "worker threads")->check(CLI::Range(1, 256));
    way->add_option("--config", way_opt.config_path, "JSON file with dimension ranges");
    way->callback([&] { code = run_way_suite(way_opt); });

    BoundsOptions bounds_opt;
    auto* bounds = app.add_subcommand(
        "hadamard-bounds", "Tabulate Hadamard error-probability floors per ancilla class");
    bounds->add_option("--out", bounds_opt.out, "output directory");
    bounds->add_option("--seed", bounds_opt.seed, "optimizer seed override");
    bounds->add_option("--config", bounds_opt.config_path,
                       "JSON file with scenario lists and an optional \"optimize\" block");
    bounds->callback([&] { code = run_hadamard_bounds(bounds_opt); });

    OptimizeOptions optimize_opt;
    auto* optimize = app.add_subcommand(
        "optimize", "Minimize the gate error over charge-conserving implementations");
    optimize->add_option("--config", optimize_opt.config_path, "scenario + optimizer JSON file")
        ->required();
    optimize->add_option("--out", optimize_opt.out, "output directory");
    optimize->add_option("--seed", optimize_opt.seed, "optimizer seed override");
    optimize->callback([&] { code = run_optimize(optimize_opt); });

    ExhibitOptions exhibit_opt;
    auto* exhibit = app.add_subcommand(
        "exhibit-violation", "Collect models that break the naive noise-disturbance product");
    exhibit->add_option("--count", exhibit_opt.trials, "random search trials")
        ->check(CLI::Range(0, 10000000));
    exhibit->add_option("--seed", exhibit_opt.seed, "search seed");
    exhibit->add_option("--out", exhibit_opt.out, "output directory");
    exhibit->add_option("--config", exhibit_opt.config_path, "JSON file with search dimensions");
    exhibit->callback([&] { code = run_exhibit_violation(exhibit_opt); });

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("waybound");
    for (const auto& a : args) argv_storage.push_back(a);
    std::vector<const char*> argv;
    argv.reserve(argv_storage.size());
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        return code;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "I/O error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

} // namespace waybound
