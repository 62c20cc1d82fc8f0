#include "qpt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace qpt {

double round_12sig(double x) {
    if (!std::isfinite(x)) throw Error(ErrorKind::parse_error, "non-finite number in output");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

Json matrix_to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(Json::array({round_12sig(m(r, c).real()), round_12sig(m(r, c).imag())}));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::parse_error, "matrix must be a non-empty array");
    const auto rows = j.size();
    const auto cols = j.at(0).size();
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const Json& row = j.at(r);
        if (!row.is_array() || row.size() != cols)
            throw Error(ErrorKind::parse_error, "ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const Json& entry = row.at(c);
            if (!entry.is_array() || entry.size() != 2)
                throw Error(ErrorKind::parse_error, "matrix entries must be [re, im] pairs");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
        }
    }
    require_finite(m, "parsed matrix");
    return m;
}

// ---------------------------------------------------------------- channel files

KrausSet ChannelFile::as_kraus() const {
    if (std::holds_alternative<KrausSet>(payload)) return std::get<KrausSet>(payload);
    return chi_to_kraus(std::get<ChiMatrix>(payload));
}

Superoperator ChannelFile::as_superoperator() const {
    if (std::holds_alternative<KrausSet>(payload)) return to_superoperator(std::get<KrausSet>(payload));
    return to_superoperator(std::get<ChiMatrix>(payload));
}

int ChannelFile::dim() const {
    if (std::holds_alternative<KrausSet>(payload)) return std::get<KrausSet>(payload).dim();
    return std::get<ChiMatrix>(payload).dim();
}

Json channel_to_json(const KrausSet& op) {
    Json j;
    j["dim"] = op.dim();
    j["kind"] = "kraus";
    j["trace_preserving"] = op.trace_preserving();
    Json ops = Json::array();
    for (const ComplexMatrix& a : op.operators()) ops.push_back(matrix_to_json(a));
    j["operators"] = std::move(ops);
    return j;
}

Json channel_to_json(const ChiMatrix& chi) {
    Json j;
    j["dim"] = chi.dim();
    j["kind"] = "chi";
    j["basis"] = "standard";
    j["trace_preserving"] = chi.trace_preserving();
    j["matrix"] = matrix_to_json(chi.matrix());
    return j;
}

namespace {

int qubits_for_dim(int dim) {
    int n_qubits = 0;
    for (int d = dim; d > 1; d /= 2) {
        if (d % 2 != 0) throw Error(ErrorKind::parse_error, "dim must be a power of two");
        ++n_qubits;
    }
    if (n_qubits == 0) throw Error(ErrorKind::parse_error, "dim must be at least 2");
    return n_qubits;
}

} // namespace

ChannelFile channel_from_json(const Json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "kraus") {
            std::vector<ComplexMatrix> ops;
            for (const Json& entry : j.at("operators")) ops.push_back(matrix_from_json(entry));
            for (const ComplexMatrix& a : ops)
                if (a.rows() != dim)
                    throw Error(ErrorKind::dimension_mismatch, "operator size disagrees with dim");
            return {KrausSet(std::move(ops))};
        }
        if (kind == "chi") {
            if (j.contains("basis") && j.at("basis").get<std::string>() != "standard")
                throw Error(ErrorKind::parse_error, "only the standard basis is supported in files");
            ComplexMatrix chi = matrix_from_json(j.at("matrix"));
            if (chi.rows() != dim * dim)
                throw Error(ErrorKind::dimension_mismatch, "chi size disagrees with dim");
            const bool tp = j.value("trace_preserving", false);
            return {ChiMatrix(standard_basis(qubits_for_dim(dim)), std::move(chi), tp,
                              Validation::lenient)};
        }
        throw Error(ErrorKind::parse_error, "unknown channel kind '" + kind + "'");
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
}

// ---------------------------------------------------------------- dataset files

namespace {

Json shots_to_json(const std::optional<long>& shots) {
    if (!shots) return Json("exact");
    return Json(*shots);
}

std::optional<long> shots_from_json(const Json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "exact")
            throw Error(ErrorKind::parse_error, "shots must be a count or \"exact\"");
        return std::nullopt;
    }
    const long n = j.get<long>();
    if (n < 1) throw Error(ErrorKind::parse_error, "shots must be positive");
    return n;
}

} // namespace

Json dataset_to_json(const TomographyDataset& data) {
    Json j;
    j["dim"] = data.dim;
    j["shots"] = shots_to_json(data.shots);
    j["seed"] = data.seed;
    Json records = Json::array();
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        Json record;
        record["j"] = i;
        record["rho"] = matrix_to_json(data.records[i]);
        records.push_back(std::move(record));
    }
    j["records"] = std::move(records);
    return j;
}

TomographyDataset dataset_from_json(const Json& j) {
    try {
        TomographyDataset data;
        data.dim = j.at("dim").get<int>();
        data.shots = shots_from_json(j.at("shots"));
        data.seed = j.at("seed").get<std::uint64_t>();
        const int n2 = data.dim * data.dim;
        data.records.resize(static_cast<std::size_t>(n2));
        std::vector<bool> seen(static_cast<std::size_t>(n2), false);
        for (const Json& record : j.at("records")) {
            const int idx = record.at("j").get<int>();
            if (idx < 0 || idx >= n2 || seen[static_cast<std::size_t>(idx)])
                throw Error(ErrorKind::incomplete_dataset, "record indices must cover 0..N^2-1 once");
            seen[static_cast<std::size_t>(idx)] = true;
            data.records[static_cast<std::size_t>(idx)] = matrix_from_json(record.at("rho"));
        }
        for (bool s : seen)
            if (!s) throw Error(ErrorKind::incomplete_dataset, "missing records");
        return data;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
}

// ------------------------------------------------------------- instrument files

Json instrument_to_json(const InstrumentModel& model) {
    Json j;
    j["dim"] = model.dim();
    Json branches = Json::array();
    for (const InstrumentBranch& b : model.branches()) {
        Json entry;
        entry["label"] = b.label;
        Json ops = Json::array();
        for (const ComplexMatrix& a : b.operation.operators()) ops.push_back(matrix_to_json(a));
        entry["operators"] = std::move(ops);
        branches.push_back(std::move(entry));
    }
    j["branches"] = std::move(branches);
    return j;
}

InstrumentModel instrument_from_json(const Json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        std::vector<InstrumentBranch> branches;
        for (const Json& entry : j.at("branches")) {
            std::vector<ComplexMatrix> ops;
            for (const Json& op : entry.at("operators")) ops.push_back(matrix_from_json(op));
            for (const ComplexMatrix& a : ops)
                if (a.rows() != dim)
                    throw Error(ErrorKind::dimension_mismatch, "operator size disagrees with dim");
            branches.push_back({entry.at("label").get<std::string>(), KrausSet(std::move(ops))});
        }
        return InstrumentModel(std::move(branches));
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
}

// ---------------------------------------------------------- branch dataset files

Json branch_dataset_to_json(const BranchDataset& data) {
    Json j;
    j["dim"] = data.dim;
    j["branch"] = data.branch;
    j["trials"] = shots_to_json(data.trials);
    j["seed"] = data.seed;
    Json records = Json::array();
    for (const BranchRecord& r : data.records) {
        Json record;
        record["j"] = r.element;
        record["p"] = round_12sig(r.p);
        record["rho"] = matrix_to_json(r.rho);
        records.push_back(std::move(record));
    }
    j["records"] = std::move(records);
    return j;
}

BranchDataset branch_dataset_from_json(const Json& j) {
    try {
        BranchDataset data;
        data.dim = j.at("dim").get<int>();
        data.branch = j.value("branch", "");
        data.trials = shots_from_json(j.at("trials"));
        data.seed = j.at("seed").get<std::uint64_t>();
        for (const Json& record : j.at("records")) {
            BranchRecord r;
            r.element = record.at("j").get<int>();
            r.p = record.at("p").get<double>();
            if (r.p < 0.0 || r.p > 1.0 + 1e-12)
                throw Error(ErrorKind::parse_error, "branch probability outside [0, 1]");
            r.rho = matrix_from_json(record.at("rho"));
            data.records.push_back(std::move(r));
        }
        return data;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
}

// ----------------------------------------------------------------- matrix files

Json matrix_file_to_json(const ComplexMatrix& m) {
    Json j;
    j["dim"] = m.rows();
    j["matrix"] = matrix_to_json(m);
    return j;
}

ComplexMatrix matrix_file_from_json(const Json& j) {
    try {
        ComplexMatrix m = matrix_from_json(j.at("matrix"));
        if (j.contains("dim") && j.at("dim").get<int>() != m.rows())
            throw Error(ErrorKind::dimension_mismatch, "dim disagrees with matrix size");
        return m;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
}

// -------------------------------------------------------------------- manifests

Json manifest_to_json(const RunManifest& m) {
    Json j;
    j["command"] = m.command;
    j["inputs"] = m.inputs;
    if (m.seed) j["seed"] = *m.seed; else j["seed"] = nullptr;
    if (m.shots) j["shots"] = *m.shots; else j["shots"] = nullptr;
    j["tolerances"] = m.tolerances;
    j["tool_version"] = m.tool_version;
    return j;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::parse_error, "cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::parse_error, std::string("invalid JSON in '") + path + "': " + e.what());
    }
}

void save_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::parse_error, "cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

} // namespace qpt
