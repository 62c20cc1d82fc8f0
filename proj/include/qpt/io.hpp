// io.hpp — stable JSON file formats shared by the library and the CLI.
//
// Conventions: complex numbers as [re, im] pairs; matrices as row-major
// arrays of rows; numeric fields rounded to 12 significant digits at
// serialization so that fixed-seed pipelines are byte-identical across runs.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qpt/channel.hpp"
#include "qpt/measurement.hpp"
#include "qpt/tomography.hpp"

namespace qpt {

using Json = nlohmann::ordered_json;

// round to 12 significant digits; the shortest round-trip printing of the
// rounded value is then platform independent
double round_12sig(double x);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

// Channel files: {"dim": N, "kind": "kraus"|"chi", ...}
struct ChannelFile {
    std::variant<KrausSet, ChiMatrix> payload;

    KrausSet as_kraus() const; // chi is converted via chi_to_kraus
    Superoperator as_superoperator() const;
    int dim() const;
};

Json channel_to_json(const KrausSet& op);
Json channel_to_json(const ChiMatrix& chi);
ChannelFile channel_from_json(const Json& j);

Json dataset_to_json(const TomographyDataset& data);
TomographyDataset dataset_from_json(const Json& j);

Json instrument_to_json(const InstrumentModel& model);
InstrumentModel instrument_from_json(const Json& j);

Json branch_dataset_to_json(const BranchDataset& data);
BranchDataset branch_dataset_from_json(const Json& j);

// {"dim": N, "matrix": ...}: unitary targets and explicit states
Json matrix_file_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_file_from_json(const Json& j);

struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::optional<std::int64_t> seed;
    std::optional<std::string> shots; // count or "exact"
    Json tolerances = Json::object();
    std::string tool_version;
};

Json manifest_to_json(const RunManifest& m);

// Parse helpers; wrap nlohmann exceptions into ErrorKind::parse_error.
Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

} // namespace qpt
