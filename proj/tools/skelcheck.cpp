// skelcheck: skeleton-based model checking of coloured and P/T nets.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "skel/checker.hpp"
#include "skel/error.hpp"
#include "skel/folding.hpp"
#include "skel/fullness.hpp"
#include "skel/injection.hpp"
#include "skel/io.hpp"
#include "skel/verify.hpp"

namespace {

using namespace skel;

struct Config {
    std::string mode;
    std::string netPath;
    std::string formulaPath;
    std::size_t stateCap = kDefaultStateCap;
    std::size_t probeCap = 100'000;
    std::size_t unfoldCap = kDefaultUnfoldCap;
    std::optional<double> timeLimit; // seconds per formula
    bool machine = false;
    bool timing = false;
    bool pnml = false;
    bool race = false;
    bool noFold = false;
    std::string dotDir;
    unsigned workers = 1;
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const ColouredNet& coloured(const AnyNet& net, const std::string& mode) {
    if (!std::holds_alternative<ColouredNet>(net)) throw InputError(mode + " needs a coloured net");
    return std::get<ColouredNet>(net);
}

std::string class_text(const ColouredNet& net, const std::vector<std::size_t>& members) {
    std::string out = "{";
    for (std::size_t i = 0; i < members.size(); ++i) out += (i ? "," : "") + net.transitions[members[i]].name;
    return out + "}";
}

void write_dot(const Config& cfg, const std::string& name, const KripkeStructure& k) {
    std::filesystem::create_directories(cfg.dotDir);
    auto path = std::filesystem::path(cfg.dotDir) / (name + ".dot");
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << kripke_to_dot(k, name);
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

Budgets budgets_of(const Config& cfg) {
    Budgets b;
    b.stateCap = cfg.stateCap;
    b.probeCap = cfg.probeCap;
    b.unfoldCap = cfg.unfoldCap;
    if (cfg.timeLimit) b.timeLimit = std::chrono::milliseconds(static_cast<long long>(*cfg.timeLimit * 1000));
    b.fold = !cfg.noFold;
    b.race = cfg.race;
    return b;
}

int run_verify(const Config& cfg, const AnyNet& net) {
    if (cfg.formulaPath.empty()) throw InputError("verify needs a formula file");
    auto formulas = parse_formula_file(read_file(cfg.formulaPath));
    auto budgets = budgets_of(cfg);
    std::vector<Verdict> verdicts(formulas.size());
    std::vector<std::string> errors(formulas.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (auto i = next++; i < formulas.size(); i = next++) {
            try {
                verdicts[i] = std::visit([&](const auto& n) { return verify(n, formulas[i].formula, budgets); }, net);
            } catch (const std::exception& e) {
                verdicts[i].reason = e.what();
                errors[i] = e.what();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        auto n = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(formulas.size())));
        for (unsigned w = 1; w < n; ++w) pool.emplace_back(work);
        work();
    }
    int status = 0;
    for (std::size_t i = 0; i < formulas.size(); ++i) {
        if (!errors[i].empty()) {
            std::cerr << cfg.formulaPath << ':' << formulas[i].id << ": " << errors[i] << '\n';
            status = 1;
        }
        if (cfg.machine) std::cout << machine_record(formulas[i].id, verdicts[i], cfg.timing) << '\n';
        else std::cout << human_record(formulas[i], verdicts[i]) << '\n';
    }
    if (!cfg.dotDir.empty()) {
        ExplorationLimits limits;
        limits.stateCap = cfg.stateCap;
        for (const auto& f : formulas) {
            auto props = propositions_of(to_nnf(f.formula));
            try {
                auto k = std::visit(
                    [&](const auto& n) {
                        if constexpr (std::is_same_v<std::decay_t<decltype(n)>, ColouredNet>)
                            return build_kripke(skeleton(n), props, limits);
                        else
                            return build_kripke(n, props, limits);
                    },
                    net);
                write_dot(cfg, stem(cfg.netPath) + "-" + std::to_string(f.id), k);
            } catch (const StateCapExceeded& e) {
                std::cerr << "no DOT for formula " << f.id << ": " << e.what() << '\n';
            }
        }
    }
    return status;
}

void emit(const Config& cfg, const PTNet& net, const std::string& id) {
    std::cout << (cfg.pnml ? write_pnml(net, id) : print_net(net));
}
void emit(const Config& cfg, const ColouredNet& net, const std::string& id) {
    std::cout << (cfg.pnml ? write_pnml(net, id) : print_net(net));
}

int run_skeleton(const Config& cfg, const AnyNet& net) {
    auto s = std::holds_alternative<PTNet>(net) ? std::get<PTNet>(net) : skeleton(std::get<ColouredNet>(net));
    emit(cfg, s, stem(cfg.netPath) + "-skeleton");
    if (!cfg.dotDir.empty()) {
        ExplorationLimits limits;
        limits.stateCap = cfg.stateCap;
        write_dot(cfg, stem(cfg.netPath) + "-skeleton", build_kripke(s, {}, limits));
    }
    return 0;
}

int run_fold(const Config& cfg, const AnyNet& net) {
    if (!std::holds_alternative<PTNet>(net)) throw InputError("fold needs a P/T net");
    const auto& pt = std::get<PTNet>(net);
    std::vector<FormulaEntry> formulas;
    if (!cfg.formulaPath.empty()) formulas = parse_formula_file(read_file(cfg.formulaPath));
    if (formulas.empty()) formulas.push_back({0, "true", parse_formula("true")});
    for (const auto& f : formulas) {
        auto folded = fold(pt, f.formula);
        if (!cfg.pnml) {
            std::cout << "# formula " << f.id << ": " << to_string(folded.formula) << '\n'
                      << "# " << folded.net.places.size() << " places, " << folded.net.transitions.size()
                      << " transitions" << (folding_worthwhile(pt, folded.net) ? "" : ", not worthwhile") << '\n';
        }
        emit(cfg, folded.net, stem(cfg.netPath) + "-folded-" + std::to_string(f.id));
    }
    return 0;
}

int run_unfold(const Config& cfg, const AnyNet& net) {
    emit(cfg, unfold(coloured(net, "unfold"), cfg.unfoldCap).net, stem(cfg.netPath) + "-unfolded");
    return 0;
}

int run_fullness(const Config& cfg, const AnyNet& net) {
    const auto& c = coloured(net, "fullness");
    auto analysis = analyze_skeleton(c);
    const auto& cls = analysis.classification;
    for (std::size_t i = 0; i < cls.minimal.size(); ++i) {
        const auto& r = analysis.minimalResults[i];
        std::cout << "class " << class_text(c, cls.classes[cls.minimal[i]]) << ": ";
        switch (r.status) {
        case FullnessResult::Status::Full: std::cout << "FULL"; break;
        case FullnessResult::Status::NotFull: std::cout << "NOT FULL"; break;
        case FullnessResult::Status::AssumedNonFull: std::cout << "ASSUMED NON-FULL (" << r.reason << ')'; break;
        }
        std::cout << '\n';
    }
    std::cout << "skeleton " << (analysis.preserving ? "preserves" : "may not preserve") << " deadlocks\n";
    (void)cfg;
    return 0;
}

int run_inject(const Config& cfg, const AnyNet& net) {
    auto s = inject_deadlocks(coloured(net, "inject"));
    emit(cfg, s.net, stem(cfg.netPath) + "-injected");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Config cfg;
    CLI::App app{"Skeleton-based model checking of coloured and P/T nets"};
    app.add_option("mode", cfg.mode, "verify, skeleton, fold, unfold, fullness or inject")
        ->required()
        ->check(CLI::IsMember({"verify", "skeleton", "fold", "unfold", "fullness", "inject"}));
    app.add_option("net", cfg.netPath, "Net file (.pnml/.xml for PNML, textual otherwise)")->required();
    app.add_option("formulas", cfg.formulaPath, "Formula file, one formula per line");
    app.add_option("--state-cap", cfg.stateCap, "States per exploration")
        ->envname("SKELCHECK_STATE_CAP")
        ->check(CLI::PositiveNumber);
    app.add_option("--probe-cap", cfg.probeCap, "States for the deadlock-freedom probe")
        ->envname("SKELCHECK_PROBE_CAP")
        ->check(CLI::PositiveNumber);
    app.add_option("--unfold-cap", cfg.unfoldCap, "Firing modes per unfolding")
        ->envname("SKELCHECK_UNFOLD_CAP")
        ->check(CLI::PositiveNumber);
    app.add_option("--time-limit", cfg.timeLimit, "Seconds per formula")
        ->envname("SKELCHECK_TIME_LIMIT")
        ->check(CLI::PositiveNumber);
    app.add_option("--workers", cfg.workers, "Formulas verified concurrently")
        ->envname("SKELCHECK_WORKERS")
        ->check(CLI::PositiveNumber);
    app.add_option("--dot", cfg.dotDir, "Directory for DOT dumps of Kripke structures");
    app.add_flag("--machine", cfg.machine, "Tab-separated verdict records");
    app.add_flag("--timing", cfg.timing, "Include milliseconds in machine records");
    app.add_flag("--pnml", cfg.pnml, "Write nets as PNML");
    app.add_flag("--race", cfg.race, "Race the direct check against the skeleton path");
    app.add_flag("--no-fold", cfg.noFold, "Never fold P/T input");
    CLI11_PARSE(app, argc, argv);

    try {
        auto net = load_net(cfg.netPath);
        if (cfg.mode == "verify") return run_verify(cfg, net);
        if (cfg.mode == "skeleton") return run_skeleton(cfg, net);
        if (cfg.mode == "fold") return run_fold(cfg, net);
        if (cfg.mode == "unfold") return run_unfold(cfg, net);
        if (cfg.mode == "fullness") return run_fullness(cfg, net);
        return run_inject(cfg, net);
    } catch (const ParseError& e) {
        std::cerr << "skelcheck: " << e.what();
        if (e.line()) std::cerr << " (line " << e.line() << ", column " << e.column() << ')';
        std::cerr << '\n';
    } catch (const std::exception& e) {
        std::cerr << "skelcheck: " << e.what() << '\n';
    }
    return 1;
}
