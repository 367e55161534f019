// Command-line surface for the chip-firing engine. Every library operation
// is reachable here with JSON input and reproducible, deterministic output.
//
// Exit codes: 0 success or a true answer, 1 false answer or violation,
// 2 usage problems (bad arguments, malformed or non-square JSON),
// 3 budget refusal.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "chipfire/io_json.hpp"
#include "chipfire/selftest.hpp"

namespace {

using namespace chipfire;
using nlohmann::json;

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Options {
    std::string matrix_path;
    std::string rate_csv;
    std::uint64_t budget_omega = kDefaultOmegaBudget;
    std::uint64_t budget_box = kDefaultBoxBudget;
    std::uint64_t step_cap = kDefaultStepCap;
    std::uint64_t seed = 0;
    bool json_out = false;
    bool witness = false;
    std::string dot_path;
    std::string policy = "lowest";

    std::string f_csv;        // parking test
    std::string u_csv;        // recurrent test / stabilize / allowed / avalanche
    std::string v_csv;        // classes
    std::string w_csv;        // classes same
    std::string minor_csv;    // info --minor
    std::string allowed_method = "greedy";
    int budget_subsets = kDefaultSubsetBudget;
    int vertex = 0;           // avalanche -i
    bool oracle = false;      // parking test --oracle
    int selftest_matrices = 200;
    std::uint64_t selftest_seed = SelftestConfig{}.seed;
};

Vec parse_int_list(const std::string& text) {
    Vec out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto begin = item.find_first_not_of(" \t");
        const auto end = item.find_last_not_of(" \t");
        if (begin == std::string::npos) throw UsageError("empty entry in vector: " + text);
        try {
            out.emplace_back(item.substr(begin, end - begin + 1));
        } catch (const std::exception&) {
            throw UsageError("not an integer: " + item);
        }
    }
    if (out.empty()) throw UsageError("empty vector argument");
    return out;
}

ToppleMatrix load_matrix(const Options& opts) {
    if (opts.matrix_path.empty()) throw UsageError("missing --matrix PATH");
    return ToppleMatrix::from_rows(load_matrix_file(opts.matrix_path));
}

RateVector pick_rate(const Options& opts, const ToppleMatrix& m) {
    if (opts.rate_csv.empty()) return canonical_rate(m);
    return make_rate_vector(m, parse_int_list(opts.rate_csv));
}

ChoicePolicy pick_policy(const Options& opts) {
    if (opts.policy == "lowest") return lowest_choice();
    if (opts.policy == "highest") return highest_choice();
    if (opts.policy == "random") return random_choice(opts.seed);
    throw UsageError("unknown policy: " + opts.policy);
}

void emit(const Options& opts, const json& j, const std::string& text) {
    if (opts.json_out) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

std::string sequence_text(const std::vector<int>& seq) {
    std::ostringstream os;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) os << ' ';
        os << seq[i];
    }
    return os.str();
}

int cmd_validate(const Options& opts) {
    if (opts.matrix_path.empty()) throw UsageError("missing --matrix PATH");
    const ValidationReport report = validate_toppling(load_matrix_file(opts.matrix_path));
    std::ostringstream text;
    text << "is_toppling: " << (report.is_toppling ? "true" : "false") << "\n";
    text << "det: " << report.det << "\n";
    if (report.row_certificate) {
        text << "row_certificate: " << to_string(report.row_certificate->r) << "\n";
    }
    if (report.column_certificate) {
        text << "column_certificate: " << to_string(*report.column_certificate) << "\n";
    }
    for (const std::string& v : report.violations) text << "violation: " << v << "\n";
    emit(opts, validation_to_json(report), text.str());
    return report.is_toppling ? kExitTrue : kExitFalse;
}

int enumerate_command(const Options& opts, bool parking) {
    const ToppleMatrix m = load_matrix(opts);
    const RateVector rate = pick_rate(opts, m);
    const std::vector<Vec> set = parking ? enumerate_parking(m, rate, opts.budget_box)
                                         : enumerate_recurrent(m, rate, opts.budget_box);
    const bool counts_match = Int(set.size()) == m.det();
    std::ostringstream text;
    for (const Vec& v : set) text << to_string(v) << "\n";
    text << "count: " << set.size() << "\n";
    text << "det: " << m.det() << "\n";
    text << "count == det: " << (counts_match ? "true" : "false") << "\n";
    json j{{parking ? "parking" : "recurrent", vec_list_to_json(set)},
           {"count", set.size()},
           {"det", int_to_json(m.det())},
           {"count_equals_det", counts_match}};
    emit(opts, j, text.str());
    return counts_match ? kExitTrue : kExitFalse;
}

int cmd_parking_test(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const RateVector rate = pick_rate(opts, m);
    const Vec f = parse_int_list(opts.f_csv);
    std::ostringstream text;
    json j;
    bool parking = false;
    if (opts.oracle) {
        const ParkingScanResult res = is_parking_bruteforce(m, rate, f, opts.budget_omega);
        parking = res.parking;
        text << "parking: " << (parking ? "true" : "false") << "\n";
        j["parking"] = parking;
        if (opts.witness && res.witness_chi) {
            text << "witness_chi: " << to_string(*res.witness_chi) << "\n";
            j["witness_chi"] = vec_to_json(*res.witness_chi);
        }
    } else {
        const ParkingSequenceResult res = is_parking_greedy(m, rate, f, pick_policy(opts));
        parking = res.parking;
        text << "parking: " << (parking ? "true" : "false") << "\n";
        j["parking"] = parking;
        if (opts.witness) {
            if (res.parking) {
                text << "sequence: " << sequence_text(res.sequence) << "\n";
                j["sequence"] = res.sequence;
            } else {
                text << "stall_step: " << res.stall_step << "\n";
                j["stall_step"] = res.stall_step;
            }
        }
    }
    emit(opts, j, text.str());
    return parking ? kExitTrue : kExitFalse;
}

int cmd_allowed(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const Vec u = parse_int_list(opts.u_csv);
    bool allowed = false;
    if (opts.allowed_method == "greedy") {
        allowed = is_r_allowed(m, pick_rate(opts, m), u);
    } else if (opts.allowed_method == "scan") {
        allowed = is_r_allowed_bruteforce(m, pick_rate(opts, m), u, opts.budget_omega);
    } else if (opts.allowed_method == "dhar") {
        allowed = is_dhar_allowed(m, u, opts.budget_subsets);
    } else {
        throw UsageError("unknown allowed method: " + opts.allowed_method);
    }
    std::ostringstream text;
    text << "allowed: " << (allowed ? "true" : "false") << "\n";
    text << "method: " << opts.allowed_method << "\n";
    emit(opts, json{{"allowed", allowed}, {"method", opts.allowed_method}}, text.str());
    return allowed ? kExitTrue : kExitFalse;
}

int cmd_info(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    std::ostringstream text;
    text << "n: " << m.size() << "\n";
    text << "det: " << m.det() << "\n";
    text << "d: " << to_string(d_cap(m)) << "\n";
    text << "canonical_rate: " << to_string(canonical_rate(m).r) << "\n";
    for (const Vec& row : m.adj()) text << "adj_row: " << to_string(row) << "\n";
    json j{{"n", m.size()},
           {"det", int_to_json(m.det())},
           {"d", vec_to_json(d_cap(m))},
           {"canonical_rate", vec_to_json(canonical_rate(m).r)},
           {"adj", matrix_to_json(m.adj())["rows"]}};
    if (!opts.minor_csv.empty()) {
        const Vec raw = parse_int_list(opts.minor_csv);
        std::vector<int> subset;
        for (const Int& x : raw) {
            if (x < 1 || x > m.size()) throw UsageError("minor index out of range: " + x.str());
            subset.push_back(x.convert_to<int>());
        }
        const Int minor = principal_minor(m, subset);
        text << "principal_minor: " << minor << "\n";
        j["principal_minor"] = int_to_json(minor);
    }
    emit(opts, j, text.str());
    return kExitTrue;
}

int cmd_avalanche(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const Vec u = parse_int_list(opts.u_csv);
    const Vec result = avalanche_op(m, u, opts.vertex, pick_policy(opts), opts.step_cap);
    std::ostringstream text;
    text << "result: " << to_string(result) << "\n";
    emit(opts, json{{"result", vec_to_json(result)}}, text.str());
    return kExitTrue;
}

int cmd_recurrent_test(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const RateVector rate = pick_rate(opts, m);
    const Vec u = parse_int_list(opts.u_csv);
    const bool recurrent = is_recurrent(m, rate, u, opts.step_cap);
    std::ostringstream text;
    text << "recurrent: " << (recurrent ? "true" : "false") << "\n";
    json j{{"recurrent", recurrent}};
    if (opts.witness && is_stable(m, u)) {
        const StabilizeResult res = stabilize(m, vec_add(u, rate.c), {}, opts.step_cap);
        text << "reloaded_stabilizes_to: " << to_string(res.configuration) << "\n";
        text << "representation: " << to_string(res.record.representation) << "\n";
        j["reloaded_stabilizes_to"] = vec_to_json(res.configuration);
        j["representation"] = vec_to_json(res.record.representation);
    }
    emit(opts, j, text.str());
    return recurrent ? kExitTrue : kExitFalse;
}

int cmd_bijection(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const RateVector rate = pick_rate(opts, m);
    const std::vector<Vec> parking = enumerate_parking(m, rate, opts.budget_box);
    const std::vector<Vec> recurrent = enumerate_recurrent(m, rate, opts.budget_box);
    std::vector<Vec> image;
    image.reserve(parking.size());
    for (const Vec& f : parking) image.push_back(parking_to_recurrent(m, f));
    std::sort(image.begin(), image.end());
    const bool verified = image == recurrent;
    std::ostringstream text;
    if (verified) {
        text << "bijection verified: " << parking.size() << " pairs\n";
    } else {
        text << "bijection FAILED\n";
        text << "parking image: " << image.size() << " configurations\n";
        text << "recurrent set: " << recurrent.size() << " configurations\n";
    }
    json j{{"verified", verified}, {"pairs", parking.size()}};
    if (opts.witness || !verified) {
        j["parking"] = vec_list_to_json(parking);
        j["recurrent"] = vec_list_to_json(recurrent);
    }
    emit(opts, j, text.str());
    return verified ? kExitTrue : kExitFalse;
}

int cmd_classes_same(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const Vec v = parse_int_list(opts.v_csv);
    const Vec w = parse_int_list(opts.w_csv);
    const SameClassResult res = same_class(m, v, w);
    std::ostringstream text;
    text << "same_class: " << (res.same ? "true" : "false") << "\n";
    json j{{"same_class", res.same}};
    if (res.witness) {
        text << "witness_x: " << to_string(*res.witness) << "\n";
        j["witness_x"] = vec_to_json(*res.witness);
    }
    emit(opts, j, text.str());
    return res.same ? kExitTrue : kExitFalse;
}

int cmd_classes_rep(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const RateVector rate = pick_rate(opts, m);
    const Vec v = parse_int_list(opts.v_csv);
    const Vec rep = recurrent_representative(m, rate, v, opts.step_cap);
    std::ostringstream text;
    text << "representative: " << to_string(rep) << "\n";
    json j{{"representative", vec_to_json(rep)}};
    if (opts.witness) {
        const SameClassResult res = same_class(m, v, rep);
        text << "witness_x: " << to_string(*res.witness) << "\n";
        j["witness_x"] = vec_to_json(*res.witness);
    }
    emit(opts, j, text.str());
    return kExitTrue;
}

int cmd_classes_audit(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const AuditReport report = class_audit(m, opts.budget_box);
    std::ostringstream text;
    text << "det: " << report.det << "\n";
    text << "parking_count: " << report.parking_count << "\n";
    text << "recurrent_count: " << report.recurrent_count << "\n";
    if (report.violations.empty()) {
        text << "violations: none\n";
    } else {
        for (const std::string& v : report.violations) text << "violation: " << v << "\n";
    }
    emit(opts, audit_to_json(report), text.str());
    return report.passed() ? kExitTrue : kExitFalse;
}

int cmd_stabilize(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const Vec u = parse_int_list(opts.u_csv);
    const StabilizeResult res = stabilize(m, u, pick_policy(opts), opts.step_cap);
    std::ostringstream text;
    text << "stable: " << to_string(res.configuration) << "\n";
    text << "representation: " << to_string(res.record.representation) << "\n";
    text << "sequence: " << sequence_text(res.record.sequence) << "\n";
    json j{{"stable", vec_to_json(res.configuration)}, {"record", record_to_json(res.record)}};
    emit(opts, j, text.str());
    return kExitTrue;
}

int cmd_digraph(const Options& opts) {
    const ToppleMatrix m = load_matrix(opts);
    const RateVector rate = pick_rate(opts, m);
    const SandpileDigraph d = build_digraph(m, rate);
    Int edges = 0;
    for (const auto& row : d.multiplicity) {
        for (const Int& x : row) edges += x;
    }
    std::ostringstream text;
    text << "vertices: " << d.n + 1 << "\n";
    text << "edges: " << edges << "\n";
    for (int a = 0; a <= d.n; ++a) {
        for (int b = 0; b <= d.n; ++b) {
            if (d.multiplicity[a][b] > 0) {
                text << "multiplicity " << a << "->" << b << ": " << d.multiplicity[a][b] << "\n";
            }
        }
    }
    json j = digraph_to_json(d);
    j["edges"] = int_to_json(edges);
    Int scaled_det = determinant(scaled_matrix(m, rate));
    j["scaled_det"] = int_to_json(scaled_det);
    text << "scaled_det: " << scaled_det << "\n";
    if (d.n + 1 <= kDefaultArborescenceBudget) {
        const Int count = count_arborescences(d, 0);
        text << "arborescences: " << count << "\n";
        j["arborescences"] = int_to_json(count);
    }
    if (!opts.dot_path.empty()) {
        std::ofstream out(opts.dot_path);
        if (!out) throw UsageError("cannot write DOT file: " + opts.dot_path);
        out << export_dot(d);
        text << "dot: " << opts.dot_path << "\n";
        j["dot"] = opts.dot_path;
    }
    emit(opts, j, text.str());
    return kExitTrue;
}

int cmd_selftest(const Options& opts) {
    SelftestConfig config;
    config.seed = opts.selftest_seed;
    config.pool_size = opts.selftest_matrices;
    const std::vector<CriterionResult> results = run_acceptance(config);
    std::ostringstream text;
    json checks = json::array();
    int failed = 0;
    for (const CriterionResult& r : results) {
        text << "[" << (r.passed ? "PASS" : "FAIL") << "] " << r.id << " " << r.name << " - "
             << r.detail << "\n";
        checks.push_back(json{{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                              {"detail", r.detail}});
        if (!r.passed) ++failed;
    }
    text << (failed == 0 ? "OK" : "FAILED") << ": " << results.size() - failed << "/"
         << results.size() << " criteria passed\n";
    emit(opts, json{{"checks", checks}, {"passed", failed == 0}}, text.str());
    return failed == 0 ? kExitTrue : kExitFalse;
}

}  // namespace

int main(int argc, char** argv) {
    Options opts;
    CLI::App app{"exact chip-firing engine: parking functions and recurrent configurations "
                 "on toppling matrices"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--matrix", opts.matrix_path, "matrix JSON file {\"n\":..,\"rows\":[[..]]}");
    app.add_option("--rate", opts.rate_csv, "rate vector \"a,b,...\" (default: canonical 1*adj)");
    app.add_option("--budget-omega", opts.budget_omega, "Omega(r) scan budget");
    app.add_option("--budget-box", opts.budget_box, "stable box enumeration budget");
    app.add_option("--step-cap", opts.step_cap, "toppling step cap");
    app.add_option("--seed", opts.seed, "seed for randomized policies");
    app.add_flag("--json", opts.json_out, "emit JSON instead of text");
    app.add_flag("--witness", opts.witness, "include witnesses in output");

    CLI::App* validate = app.add_subcommand("validate", "check the toppling-matrix conditions");
    validate->fallthrough();

    CLI::App* info = app.add_subcommand("info", "det, adjugate, d and canonical rate");
    info->fallthrough();
    info->add_option("--minor", opts.minor_csv, "principal minor for index subset \"i,j,...\"");

    CLI::App* parking = app.add_subcommand("parking", "parking-function operations");
    parking->fallthrough();
    parking->require_subcommand(1);
    CLI::App* parking_test = parking->add_subcommand("test", "membership test for one function");
    parking_test->fallthrough();
    parking_test->add_option("-f,--function", opts.f_csv, "candidate \"a,b,...\"")->required();
    parking_test->add_option("--policy", opts.policy, "tie-break: lowest|highest|random");
    parking_test->add_flag("--oracle", opts.oracle, "use the full Omega(r) scan");
    CLI::App* parking_enum = parking->add_subcommand("enumerate", "list all parking functions");
    parking_enum->fallthrough();

    CLI::App* recurrent = app.add_subcommand("recurrent", "recurrent-configuration operations");
    recurrent->fallthrough();
    recurrent->require_subcommand(1);
    CLI::App* recurrent_test = recurrent->add_subcommand("test", "recurrence test for one configuration");
    recurrent_test->fallthrough();
    recurrent_test->add_option("-u,--configuration", opts.u_csv, "configuration \"a,b,...\"")
        ->required();
    CLI::App* recurrent_enum =
        recurrent->add_subcommand("enumerate", "list all recurrent configurations");
    recurrent_enum->fallthrough();

    CLI::App* allowed = app.add_subcommand("allowed", "allowed tests for a configuration");
    allowed->fallthrough();
    allowed->add_option("-u,--configuration", opts.u_csv, "configuration \"a,b,...\"")->required();
    allowed->add_option("--method", opts.allowed_method, "greedy|scan|dhar");
    allowed->add_option("--budget-subsets", opts.budget_subsets, "max n for the Dhar subset scan");

    CLI::App* avalanche = app.add_subcommand("avalanche", "apply one avalanche operator");
    avalanche->fallthrough();
    avalanche->add_option("-u,--configuration", opts.u_csv, "stable configuration")->required();
    avalanche->add_option("-i,--vertex", opts.vertex, "vertex receiving the chip")->required();

    CLI::App* bijection =
        app.add_subcommand("bijection", "verify d - f maps parking onto recurrent");
    bijection->fallthrough();

    CLI::App* classes = app.add_subcommand("classes", "lattice-class operations");
    classes->fallthrough();
    classes->require_subcommand(1);
    CLI::App* classes_same = classes->add_subcommand("same", "test v ~ w modulo the row lattice");
    classes_same->fallthrough();
    classes_same->add_option("-v", opts.v_csv, "first vector")->required();
    classes_same->add_option("-w", opts.w_csv, "second vector")->required();
    CLI::App* classes_rep =
        classes->add_subcommand("rep", "recurrent representative of a vector's class");
    classes_rep->fallthrough();
    classes_rep->add_option("-v", opts.v_csv, "integer vector")->required();
    CLI::App* classes_audit =
        classes->add_subcommand("audit", "exhaustive class audit of both sets");
    classes_audit->fallthrough();

    CLI::App* stabilize_cmd = app.add_subcommand("stabilize", "stabilize a configuration");
    stabilize_cmd->fallthrough();
    stabilize_cmd->add_option("-u,--configuration", opts.u_csv, "configuration \"a,b,...\"")
        ->required();
    stabilize_cmd->add_option("--policy", opts.policy, "toppling order: lowest|highest|random");

    CLI::App* digraph_cmd = app.add_subcommand("digraph", "build and export D(Delta, r)");
    digraph_cmd->fallthrough();
    digraph_cmd->add_option("--dot", opts.dot_path, "write DOT multigraph to PATH");

    CLI::App* selftest = app.add_subcommand("selftest", "run the full golden and property battery");
    selftest->fallthrough();
    selftest->add_option("--matrices", opts.selftest_matrices, "random matrix count")
        ->check(CLI::Range(4, 1000000));
    selftest->add_option("--selftest-seed", opts.selftest_seed, "battery seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*validate) return cmd_validate(opts);
        if (*info) return cmd_info(opts);
        if (*allowed) return cmd_allowed(opts);
        if (*avalanche) return cmd_avalanche(opts);
        if (*parking_test) return cmd_parking_test(opts);
        if (*parking_enum) return enumerate_command(opts, true);
        if (*recurrent_test) return cmd_recurrent_test(opts);
        if (*recurrent_enum) return enumerate_command(opts, false);
        if (*bijection) return cmd_bijection(opts);
        if (*classes_same) return cmd_classes_same(opts);
        if (*classes_rep) return cmd_classes_rep(opts);
        if (*classes_audit) return cmd_classes_audit(opts);
        if (*stabilize_cmd) return cmd_stabilize(opts);
        if (*digraph_cmd) return cmd_digraph(opts);
        if (*selftest) return cmd_selftest(opts);
        throw UsageError("no subcommand selected");
    } catch (const BudgetError& e) {
        std::cerr << "budget refusal: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ValidationError& e) {
        std::cerr << "violation: " << e.what() << "\n";
        return kExitFalse;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
