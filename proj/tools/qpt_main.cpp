// qpt — command-line surface for the process-tomography pipeline:
// simulate datasets, reconstruct chi, convert representations, analyze.
//
// Exit codes: 0 ok, 2 malformed input, 3 dimension mismatch, 4 inconsistent
// data, 5 method/dimension mismatch, 6 branch-cut eigenvalue.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qpt/bloch.hpp"
#include "qpt/channel.hpp"
#include "qpt/io.hpp"
#include "qpt/measurement.hpp"
#include "qpt/metrics.hpp"
#include "qpt/tomography.hpp"

namespace {

constexpr const char* kToolVersion = "qpt 0.1.0";

constexpr int kExitParse = 2;
constexpr int kExitDims = 3;
constexpr int kExitInconsistent = 4;
constexpr int kExitMethod = 5;
constexpr int kExitBranchCut = 6;

int exit_code_for(const qpt::Error& e, bool dims_are_method_mismatch) {
    switch (e.kind()) {
        case qpt::ErrorKind::parse_error:
            return kExitParse;
        case qpt::ErrorKind::dimension_mismatch:
        case qpt::ErrorKind::wrong_dimension:
            return dims_are_method_mismatch ? kExitMethod : kExitDims;
        case qpt::ErrorKind::inconsistent_data:
            return kExitInconsistent;
        case qpt::ErrorKind::branch_cut_eigenvalue:
            return kExitBranchCut;
        default:
            return 1;
    }
}

std::optional<long> parse_shots(const std::string& text) {
    if (text == "exact") return std::nullopt;
    try {
        const long n = std::stol(text);
        if (n < 1) throw qpt::Error(qpt::ErrorKind::parse_error, "shots must be positive");
        return n;
    } catch (const std::exception&) {
        throw qpt::Error(qpt::ErrorKind::parse_error, "shots must be a positive count or 'exact'");
    }
}

std::int64_t default_seed() {
    if (const char* env = std::getenv("QPT_SEED")) {
        try {
            return std::stoll(env);
        } catch (const std::exception&) {
            throw qpt::Error(qpt::ErrorKind::parse_error, "QPT_SEED must be an integer");
        }
    }
    return 0;
}

qpt::RunManifest make_manifest(const std::string& command, std::vector<std::string> inputs,
                               std::optional<std::int64_t> seed, std::optional<std::string> shots) {
    qpt::RunManifest m;
    m.command = command;
    m.inputs = std::move(inputs);
    m.seed = seed;
    m.shots = std::move(shots);
    m.tool_version = kToolVersion;
    return m;
}

int qubits_for_dim(int dim) {
    int k = 0;
    for (int d = dim; d > 1; d /= 2) {
        if (d % 2 != 0) throw qpt::Error(qpt::ErrorKind::wrong_dimension, "dim is not a power of two");
        ++k;
    }
    return k;
}

void emit_csv_row(std::ostream& out, const std::string& name, const std::vector<double>& values) {
    out << name;
    for (double v : values) out << "," << qpt::Json(qpt::round_12sig(v)).dump();
    out << "\n";
}

// ----------------------------------------------------------------- subcommands

int cmd_generate(const std::string& channel_path, int qubits, const std::string& shots_text,
                 std::int64_t seed, const std::string& out_path) {
    const auto shots = parse_shots(shots_text);
    qpt::ChannelFile channel = qpt::channel_from_json(qpt::load_json(channel_path));
    if (channel.dim() != (1 << qubits))
        throw qpt::Error(qpt::ErrorKind::dimension_mismatch,
                         "channel dim " + std::to_string(channel.dim()) + " does not match --qubits " +
                             std::to_string(qubits));

    qpt::TomographyDataset data =
        qpt::simulate_dataset(channel.as_kraus(), shots, static_cast<std::uint64_t>(seed));

    qpt::Json j = qpt::dataset_to_json(data);
    j["manifest"] = qpt::manifest_to_json(make_manifest(
        "qpt generate " + channel_path + " --qubits " + std::to_string(qubits) + " --shots " +
            shots_text + " --seed " + std::to_string(seed) + " --out " + out_path,
        {channel_path}, seed, shots_text));
    qpt::save_json(out_path, j);
    std::cout << "wrote " << out_path << " (" << data.records.size() << " records)\n";
    return 0;
}

int cmd_reconstruct(const std::string& dataset_path, const std::string& method, bool project,
                    const std::string& out_path) {
    qpt::TomographyDataset data = qpt::dataset_from_json(qpt::load_json(dataset_path));
    const qpt::StateBasis states = qpt::projector_state_basis(data.dim);
    const qpt::OperatorBasis basis = qpt::standard_basis(qubits_for_dim(data.dim));

    const qpt::BetaTensor beta = qpt::compute_beta(basis, states);
    const qpt::LambdaMatrix lambda = qpt::compute_lambda(data, states);

    qpt::ReconstructionReport report;
    std::optional<qpt::ChiMatrix> chi;
    try {
        if (method == "general") {
            chi = qpt::reconstruct_chi(beta, lambda, basis, &report);
        } else if (method == "closed1q") {
            chi = qpt::reconstruct_chi_closed_form_1q(data);
        } else if (method == "closed2q") {
            chi = qpt::reconstruct_chi_closed_form_2q(data);
        } else {
            throw qpt::Error(qpt::ErrorKind::parse_error, "unknown method '" + method + "'");
        }
    } catch (const qpt::Error& e) {
        if (e.kind() == qpt::ErrorKind::wrong_dimension)
            throw qpt::Error(qpt::ErrorKind::dimension_mismatch,
                             std::string("method ") + method + " does not fit this dataset");
        throw;
    }

    if (method != "general") {
        // residual of the closed-form chi against the same linear system
        const int n2 = basis.size();
        qpt::ComplexVector chi_vec(n2 * n2), lambda_vec(n2 * n2);
        for (int m = 0; m < n2; ++m)
            for (int n = 0; n < n2; ++n) chi_vec(m * n2 + n) = chi->matrix()(m, n);
        for (int j = 0; j < n2; ++j)
            for (int k = 0; k < n2; ++k) lambda_vec(j * n2 + k) = lambda.matrix(j, k);
        report.residual = (beta.matrix * chi_vec - lambda_vec).norm();
        report.min_eigenvalue = chi->min_eigenvalue();
        report.tp_defect = chi->trace_preservation_defect();
    }

    if (project) {
        chi = qpt::project_physical(*chi);
        report.min_eigenvalue = chi->min_eigenvalue();
        report.tp_defect = chi->trace_preservation_defect();
    }

    qpt::Json j = qpt::channel_to_json(*chi);
    qpt::Json rep;
    rep["residual"] = qpt::round_12sig(report.residual);
    rep["min_chi_eigenvalue"] = qpt::round_12sig(report.min_eigenvalue);
    rep["trace_preservation_defect"] = qpt::round_12sig(report.tp_defect);
    j["report"] = rep;
    j["manifest"] = qpt::manifest_to_json(make_manifest(
        "qpt reconstruct " + dataset_path + " --method " + method +
            (project ? " --project-physical" : "") + " --out " + out_path,
        {dataset_path}, std::nullopt, std::nullopt));
    qpt::save_json(out_path, j);

    std::cout << "residual " << qpt::round_12sig(report.residual) << "\n"
              << "min_chi_eigenvalue " << qpt::round_12sig(report.min_eigenvalue) << "\n"
              << "trace_preservation_defect " << qpt::round_12sig(report.tp_defect) << "\n";
    return 0;
}

int cmd_kraus(const std::string& chi_path, double rank_cutoff, const std::string& out_path) {
    qpt::ChannelFile channel = qpt::channel_from_json(qpt::load_json(chi_path));
    if (!std::holds_alternative<qpt::ChiMatrix>(channel.payload))
        throw qpt::Error(qpt::ErrorKind::parse_error, "kraus expects a chi-form channel file");

    qpt::KrausSet kraus = qpt::chi_to_kraus(std::get<qpt::ChiMatrix>(channel.payload), 1e-8, rank_cutoff);

    qpt::Json j = qpt::channel_to_json(kraus);
    qpt::RunManifest manifest = make_manifest(
        "qpt kraus " + chi_path + " --rank-cutoff " + qpt::Json(rank_cutoff).dump() + " --out " + out_path,
        {chi_path}, std::nullopt, std::nullopt);
    manifest.tolerances["rank_cutoff"] = rank_cutoff;
    j["manifest"] = qpt::manifest_to_json(manifest);
    qpt::save_json(out_path, j);
    std::cout << "wrote " << out_path << " (" << kraus.size() << " Kraus operators)\n";
    return 0;
}

int cmd_bloch(const std::string& channel_path, const std::string& csv_path) {
    qpt::ChannelFile channel = qpt::channel_from_json(qpt::load_json(channel_path));
    if (channel.dim() != 2)
        throw qpt::Error(qpt::ErrorKind::dimension_mismatch, "Bloch output requires a one-qubit channel");

    const qpt::AffineMap map = qpt::affine_from_channel(channel.as_kraus());
    const qpt::PolarFactors factors = qpt::polar_factors(map);
    const qpt::DecoherenceSummary summary = qpt::decoherence_summary(map);

    std::ofstream out(csv_path);
    if (!out) throw qpt::Error(qpt::ErrorKind::parse_error, "cannot write '" + csv_path + "'");

    qpt::RunManifest manifest = make_manifest("qpt bloch " + channel_path + " --csv " + csv_path,
                                              {channel_path}, std::nullopt, std::nullopt);
    out << "# manifest: " << qpt::manifest_to_json(manifest).dump() << "\n";
    out << "quantity,v1,v2,v3,v4,v5,v6,v7,v8,v9\n";
    auto row_major = [](const Eigen::Matrix3d& m) {
        std::vector<double> v;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) v.push_back(m(r, c));
        return v;
    };
    emit_csv_row(out, "M", row_major(map.m));
    emit_csv_row(out, "c", {map.c(0), map.c(1), map.c(2)});
    emit_csv_row(out, "O", row_major(factors.rotation));
    emit_csv_row(out, "S", row_major(factors.deformation));
    emit_csv_row(out, "singular_values",
                 {summary.singular_values(0), summary.singular_values(1), summary.singular_values(2)});
    emit_csv_row(out, "det_M", {summary.determinant});
    emit_csv_row(out, "norm_c", {summary.displacement});
    std::cout << "wrote " << csv_path << "\n";
    return 0;
}

int cmd_metrics(const std::string& channel_path, const std::string& metric,
                const std::string& target_path, const std::string& state_path,
                const std::string& out_path) {
    qpt::ChannelFile channel = qpt::channel_from_json(qpt::load_json(channel_path));

    qpt::Json result;
    result["metric"] = metric;

    auto load_target = [&]() {
        if (target_path.empty())
            return qpt::ComplexMatrix(qpt::ComplexMatrix::Identity(channel.dim(), channel.dim()));
        return qpt::matrix_file_from_json(qpt::load_json(target_path));
    };
    auto load_state = [&]() {
        if (state_path.empty()) return qpt::DensityMatrix::maximally_mixed(channel.dim());
        return qpt::DensityMatrix(qpt::matrix_file_from_json(qpt::load_json(state_path)),
                                  qpt::Validation::lenient);
    };

    if (metric == "efid") {
        const qpt::ComplexMatrix target = load_target();
        const qpt::DensityMatrix rho = load_state();
        double value = 0.0;
        if (std::holds_alternative<qpt::ChiMatrix>(channel.payload)) {
            value = qpt::entanglement_fidelity_chi(rho, target, std::get<qpt::ChiMatrix>(channel.payload));
            result["form"] = "chi";
        } else {
            value = qpt::entanglement_fidelity_kraus(rho, target, std::get<qpt::KrausSet>(channel.payload));
            result["form"] = "kraus";
        }
        result["entanglement_fidelity"] = qpt::round_12sig(value);
    } else if (metric == "minfid") {
        const qpt::FidelityReport report = qpt::min_fidelity(load_target(), channel.as_kraus());
        result["min_fidelity"] = qpt::round_12sig(report.value);
        result["argmin_state"] = qpt::matrix_to_json(report.state.matrix());
        result["method"] = report.method;
    } else if (metric == "capacity") {
        const qpt::CapacityReport report = qpt::channel_capacity(channel.as_kraus());
        result["capacity"] = qpt::round_12sig(report.capacity);
        result["raw_optimum"] = qpt::round_12sig(report.raw_optimum);
        result["output_entropy"] = qpt::round_12sig(report.output_entropy);
        result["entropy_exchange"] = qpt::round_12sig(report.entropy_exchange);
        result["argmax_state"] = qpt::matrix_to_json(report.argmax_state.matrix());
        if (!report.note.empty()) result["note"] = report.note;
    } else if (metric == "lindblad") {
        const qpt::LindbladReport report = qpt::lindblad_log(channel.as_superoperator());
        result["generator"] = qpt::matrix_to_json(report.generator.matrix());
        result["fractional_positive"] =
            qpt::Json::array({report.fractional_positive[0], report.fractional_positive[1],
                              report.fractional_positive[2]});
        result["valid_generator"] = report.valid_generator;
    } else {
        throw qpt::Error(qpt::ErrorKind::parse_error, "unknown metric '" + metric + "'");
    }

    std::vector<std::string> inputs = {channel_path};
    if (!target_path.empty()) inputs.push_back(target_path);
    if (!state_path.empty()) inputs.push_back(state_path);
    result["manifest"] = qpt::manifest_to_json(make_manifest(
        "qpt metrics " + channel_path + " --metric " + metric +
            (target_path.empty() ? "" : " --target " + target_path) +
            (state_path.empty() ? "" : " --state " + state_path) +
            (out_path.empty() ? "" : " --out " + out_path),
        std::move(inputs), std::nullopt, std::nullopt));

    if (out_path.empty()) {
        std::cout << result.dump(2) << "\n";
    } else {
        qpt::save_json(out_path, result);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_measure(const std::string& instrument_path, const std::string& branch, bool all_branches,
                const std::string& trials_text, std::int64_t seed, const std::string& out_path,
                const std::string& dataset_out) {
    const auto trials = parse_shots(trials_text);
    qpt::InstrumentModel model = qpt::instrument_from_json(qpt::load_json(instrument_path));
    const qpt::OperatorBasis basis = qpt::standard_basis(qubits_for_dim(model.dim()));

    std::vector<std::string> labels;
    if (all_branches) {
        for (const qpt::InstrumentBranch& b : model.branches()) labels.push_back(b.label);
    } else {
        if (branch.empty())
            throw qpt::Error(qpt::ErrorKind::parse_error, "--branch or --all-branches is required");
        labels.push_back(branch);
    }

    for (const std::string& label : labels) {
        qpt::BranchDataset data =
            qpt::simulate_branch_dataset(model, label, trials, static_cast<std::uint64_t>(seed));
        qpt::ChiMatrix chi = qpt::reconstruct_branch(data, basis);

        const std::string path = all_branches ? out_path + label + ".json" : out_path;
        qpt::Json j = qpt::channel_to_json(chi);
        j["branch"] = label;
        j["manifest"] = qpt::manifest_to_json(make_manifest(
            "qpt measure " + instrument_path + " --branch " + label + " --trials " + trials_text +
                " --seed " + std::to_string(seed) + " --out " + path,
            {instrument_path}, seed, trials_text));
        qpt::save_json(path, j);
        std::cout << "wrote " << path << "\n";

        if (!dataset_out.empty()) {
            const std::string dpath = all_branches ? dataset_out + label + ".json" : dataset_out;
            qpt::Json dj = qpt::branch_dataset_to_json(data);
            dj["manifest"] = j["manifest"];
            qpt::save_json(dpath, dj);
            std::cout << "wrote " << dpath << "\n";
        }
    }
    return 0;
}

int cmd_verify(const std::string& path) {
    const qpt::Json j = qpt::load_json(path);
    std::string kind;
    if (j.contains("kind")) {
        kind = "channel (" + j.at("kind").get<std::string>() + ")";
        qpt::ChannelFile channel = qpt::channel_from_json(j);
        if (std::holds_alternative<qpt::ChiMatrix>(channel.payload)) {
            // re-run the strict invariants on the lenient-parsed chi
            const qpt::ChiMatrix& chi = std::get<qpt::ChiMatrix>(channel.payload);
            qpt::ChiMatrix strict(chi.basis(), chi.matrix(), chi.trace_preserving(),
                                  qpt::Validation::strict);
        }
    } else if (j.contains("branches")) {
        kind = "instrument";
        qpt::instrument_from_json(j);
    } else if (j.contains("records") && j.contains("trials")) {
        kind = "branch dataset";
        qpt::branch_dataset_from_json(j);
    } else if (j.contains("records")) {
        kind = "tomography dataset";
        qpt::dataset_from_json(j);
    } else if (j.contains("matrix")) {
        kind = "matrix";
        qpt::matrix_file_from_json(j);
    } else {
        throw qpt::Error(qpt::ErrorKind::parse_error, "unrecognized file schema");
    }
    std::cout << "ok " << kind << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum process tomography pipeline"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string channel_path, dataset_path, chi_path, instrument_path, verify_path;
    std::string out_path, csv_path, dataset_out;
    std::string shots_text = "exact", trials_text = "exact", method = "general";
    std::string metric, target_path, state_path, branch;
    int qubits = 1;
    std::int64_t seed = 0;
    bool seed_given = false, project = false, all_branches = false;
    double rank_cutoff = 1e-10;

    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed (default: QPT_SEED or 0)")
            ->each([&](const std::string&) { seed_given = true; });
    };

    CLI::App* generate = app.add_subcommand("generate", "simulate a tomography dataset");
    generate->add_option("channel", channel_path, "channel JSON file")->required();
    generate->add_option("--qubits", qubits, "number of qubits")->required();
    generate->add_option("--shots", shots_text, "shots per expectation value, or 'exact'");
    add_seed(generate);
    generate->add_option("--out", out_path, "output dataset file")->required();

    CLI::App* reconstruct = app.add_subcommand("reconstruct", "reconstruct chi from a dataset");
    reconstruct->add_option("dataset", dataset_path, "dataset JSON file")->required();
    reconstruct->add_option("--method", method, "general|closed1q|closed2q")
        ->check(CLI::IsMember({"general", "closed1q", "closed2q"}));
    reconstruct->add_flag("--project-physical", project, "clamp negative chi eigenvalues");
    reconstruct->add_option("--out", out_path, "output chi file")->required();

    CLI::App* kraus = app.add_subcommand("kraus", "recover Kraus operators from chi");
    kraus->add_option("chi", chi_path, "chi JSON file")->required();
    kraus->add_option("--rank-cutoff", rank_cutoff, "discard eigenvalues below this");
    kraus->add_option("--out", out_path, "output channel file")->required();

    CLI::App* bloch = app.add_subcommand("bloch", "emit the one-qubit affine map as CSV");
    bloch->add_option("channel", channel_path, "channel or chi JSON file")->required();
    bloch->add_option("--csv", csv_path, "output CSV file")->required();

    CLI::App* metrics = app.add_subcommand("metrics", "fidelity/capacity/lindblad metrics");
    metrics->add_option("channel", channel_path, "channel or chi JSON file")->required();
    metrics->add_option("--metric", metric, "efid|minfid|capacity|lindblad")
        ->required()
        ->check(CLI::IsMember({"efid", "minfid", "capacity", "lindblad"}));
    metrics->add_option("--target", target_path, "unitary target matrix file");
    metrics->add_option("--state", state_path, "input state matrix file");
    metrics->add_option("--out", out_path, "output JSON file (default: stdout)");

    CLI::App* measure = app.add_subcommand("measure", "reconstruct a measurement branch");
    measure->add_option("instrument", instrument_path, "instrument JSON file")->required();
    measure->add_option("--branch", branch, "branch label");
    measure->add_flag("--all-branches", all_branches, "reconstruct every branch");
    measure->add_option("--trials", trials_text, "measurement repetitions, or 'exact'");
    add_seed(measure);
    measure->add_option("--out", out_path, "output chi file (prefix with --all-branches)")->required();
    measure->add_option("--dataset-out", dataset_out, "also dump the branch dataset");

    CLI::App* verify = app.add_subcommand("verify", "re-check the invariants of any qpt file");
    verify->add_option("file", verify_path, "file to verify")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitParse;
    }

    try {
        if (!seed_given) seed = default_seed();
        if (generate->parsed())
            return cmd_generate(channel_path, qubits, shots_text, seed, out_path);
        if (reconstruct->parsed()) return cmd_reconstruct(dataset_path, method, project, out_path);
        if (kraus->parsed()) return cmd_kraus(chi_path, rank_cutoff, out_path);
        if (bloch->parsed()) return cmd_bloch(channel_path, csv_path);
        if (metrics->parsed())
            return cmd_metrics(channel_path, metric, target_path, state_path, out_path);
        if (measure->parsed())
            return cmd_measure(instrument_path, branch, all_branches, trials_text, seed, out_path,
                               dataset_out);
        if (verify->parsed()) return cmd_verify(verify_path);
    } catch (const qpt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e, reconstruct->parsed());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
