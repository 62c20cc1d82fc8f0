#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <unistd.h>
#include <fstream>
#include <sstream>
#include <string>

#include "qpt/io.hpp"
#include "test_support.hpp"

using namespace qpt;
using namespace qpt::testing;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qpt_test_" + std::to_string(static_cast<unsigned>(::getpid())) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& extra_env = "") {
    const std::string cmd = extra_env + (extra_env.empty() ? "" : " ") + QPT_BINARY + " " + args +
                            " > /dev/null 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("json round trips preserve channels, datasets, instruments") {
    Rng rng(1);

    // channel: kraus form
    KrausSet k = random_tp_channel(2, 3, rng);
    ChannelFile parsed = channel_from_json(channel_to_json(k));
    CHECK(channel_distance(parsed.as_superoperator(), to_superoperator(k)) < 1e-10);

    // channel: chi form
    ChiMatrix chi = kraus_to_chi(k, standard_basis(1));
    ChannelFile parsed_chi = channel_from_json(channel_to_json(chi));
    CHECK(channel_distance(parsed_chi.as_superoperator(), to_superoperator(k)) < 1e-10);

    // dataset
    TomographyDataset data = simulate_dataset(k, 500, 9);
    TomographyDataset back = dataset_from_json(dataset_to_json(data));
    CHECK(back.dim == data.dim);
    CHECK(back.shots == data.shots);
    CHECK(back.seed == data.seed);
    for (std::size_t j = 0; j < data.records.size(); ++j)
        CHECK(frobenius(ComplexMatrix(back.records[j] - data.records[j])) < 1e-11);

    // instrument
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    InstrumentModel model({{"0", KrausSet({p0})}, {"1", KrausSet({p1})}});
    InstrumentModel imback = instrument_from_json(instrument_to_json(model));
    CHECK(imback.branches().size() == 2);
    CHECK(imback.branch("1").operation.dim() == 2);
}

TEST_CASE("round_12sig stabilizes serialization") {
    CHECK(round_12sig(0.1 + 0.2) == round_12sig(0.3));
    CHECK(round_12sig(1.0) == 1.0);
    CHECK(round_12sig(-2.5e-17) == -2.5e-17);
}

TEST_CASE("malformed inputs raise parse errors") {
    CHECK_THROWS_AS(matrix_from_json(Json::array()), Error);
    Json bad;
    bad["dim"] = 2;
    bad["kind"] = "nonsense";
    CHECK_THROWS_AS(channel_from_json(bad), Error);
}

TEST_CASE("pipeline: generate, reconstruct, kraus, bloch, metrics, verify") {
    TempDir dir;
    save_json(dir.file("chan.json"), channel_to_json(amplitude_damping(0.19)));

    CHECK(run("generate " + dir.file("chan.json") + " --qubits 1 --shots exact --seed 3 --out " +
              dir.file("ds.json")) == 0);
    CHECK(run("reconstruct " + dir.file("ds.json") + " --method general --out " + dir.file("chi.json")) ==
          0);
    CHECK(run("kraus " + dir.file("chi.json") + " --out " + dir.file("k.json")) == 0);
    CHECK(run("bloch " + dir.file("chan.json") + " --csv " + dir.file("b.csv")) == 0);
    CHECK(run("metrics " + dir.file("chi.json") + " --metric efid --out " + dir.file("m.json")) == 0);
    CHECK(run("verify " + dir.file("chi.json")) == 0);
    CHECK(run("verify " + dir.file("ds.json")) == 0);
    CHECK(run("verify " + dir.file("k.json")) == 0);

    // reconstructed channel equals the input channel
    ChannelFile chi = channel_from_json(load_json(dir.file("chi.json")));
    CHECK(channel_distance(chi.as_superoperator(), to_superoperator(amplitude_damping(0.19))) < 1e-9);

    // kraus file reproduces it too
    ChannelFile k = channel_from_json(load_json(dir.file("k.json")));
    CHECK(channel_distance(k.as_superoperator(), to_superoperator(amplitude_damping(0.19))) < 1e-9);

    // bloch CSV carries the displacement row c = (0, 0, 0.19)
    const std::string csv = slurp(dir.file("b.csv"));
    CHECK(csv.find("\nc,0.0,0.0,0.19\n") != std::string::npos);
    CHECK(csv.find("singular_values,0.9,0.9,0.81") != std::string::npos);

    // every output embeds a manifest
    CHECK(load_json(dir.file("ds.json")).contains("manifest"));
    CHECK(load_json(dir.file("chi.json")).contains("manifest"));
    CHECK(load_json(dir.file("k.json")).contains("manifest"));
    CHECK(csv.find("# manifest: ") == 0);
}

TEST_CASE("closed-form methods agree with the general method through the CLI") {
    TempDir dir;
    save_json(dir.file("chan.json"), channel_to_json(depolarizing(0.2)));
    CHECK(run("generate " + dir.file("chan.json") + " --qubits 1 --shots exact --seed 1 --out " +
              dir.file("ds.json")) == 0);
    CHECK(run("reconstruct " + dir.file("ds.json") + " --method general --out " + dir.file("g.json")) ==
          0);
    CHECK(run("reconstruct " + dir.file("ds.json") + " --method closed1q --out " + dir.file("c.json")) ==
          0);
    ComplexMatrix a = matrix_from_json(load_json(dir.file("g.json")).at("matrix"));
    ComplexMatrix b = matrix_from_json(load_json(dir.file("c.json")).at("matrix"));
    CHECK(frobenius(ComplexMatrix(a - b)) < 1e-10);
}

TEST_CASE("exit codes: parse 2, dims 3, method 5, branch cut 6") {
    TempDir dir;

    std::ofstream(dir.file("garbage.json")) << "{not json";
    CHECK(run("generate " + dir.file("garbage.json") + " --qubits 1 --out " + dir.file("x.json")) == 2);
    CHECK(run("verify " + dir.file("garbage.json")) == 2);

    // two-qubit channel with --qubits 1: dimension contract
    Rng rng(4);
    save_json(dir.file("chan2.json"), channel_to_json(random_tp_channel(4, 2, rng)));
    CHECK(run("generate " + dir.file("chan2.json") + " --qubits 1 --shots exact --out " +
              dir.file("x.json")) == 3);

    // closed2q on one-qubit data: method mismatch
    save_json(dir.file("chan1.json"), channel_to_json(depolarizing(0.1)));
    CHECK(run("generate " + dir.file("chan1.json") + " --qubits 1 --shots exact --out " +
              dir.file("ds1.json")) == 0);
    CHECK(run("reconstruct " + dir.file("ds1.json") + " --method closed2q --out " + dir.file("x.json")) ==
          5);

    // bit-flip unitary: lindblad branch cut
    save_json(dir.file("flip.json"), channel_to_json(KrausSet({pauli_x()})));
    CHECK(run("metrics " + dir.file("flip.json") + " --metric lindblad --out " + dir.file("x.json")) ==
          6);

    // unknown CLI usage
    CHECK(run("reconstruct") == 2);
}

TEST_CASE("fixed-seed pipelines are byte-identical; QPT_SEED provides the default") {
    TempDir dir;
    save_json(dir.file("chan.json"), channel_to_json(depolarizing(0.3)));

    // identical commands (identical manifest included) must give identical bytes
    auto pipeline = [&] {
        REQUIRE(run("generate " + dir.file("chan.json") + " --qubits 1 --shots 2000 --seed 11 --out " +
                    dir.file("ds.json")) == 0);
        REQUIRE(run("reconstruct " + dir.file("ds.json") + " --method general --out " +
                    dir.file("chi.json")) == 0);
        REQUIRE(run("reconstruct " + dir.file("ds.json") + " --method general --project-physical --out " +
                    dir.file("proj.json")) == 0);
        REQUIRE(run("kraus " + dir.file("proj.json") + " --out " + dir.file("k.json")) == 0);
    };
    pipeline();
    const std::string ds = slurp(dir.file("ds.json")), chi = slurp(dir.file("chi.json")),
                      proj = slurp(dir.file("proj.json")), k = slurp(dir.file("k.json"));
    pipeline();
    CHECK(slurp(dir.file("ds.json")) == ds);
    CHECK(slurp(dir.file("chi.json")) == chi);
    CHECK(slurp(dir.file("proj.json")) == proj);
    CHECK(slurp(dir.file("k.json")) == k);

    // projection makes the reported smallest eigenvalue non-negative
    CHECK(load_json(dir.file("proj.json")).at("report").at("min_chi_eigenvalue").get<double>() >=
          -1e-12);

    // env seed matches the explicit flag, and the flag wins over the env
    CHECK(run("generate " + dir.file("chan.json") + " --qubits 1 --shots 2000 --out " +
                  dir.file("env.json"),
              "QPT_SEED=11") == 0);
    Json with_env = load_json(dir.file("env.json"));
    Json with_flag = load_json(dir.file("ds.json"));
    CHECK(with_env.at("records") == with_flag.at("records"));
    CHECK(run("generate " + dir.file("chan.json") + " --qubits 1 --shots 2000 --seed 12 --out " +
                  dir.file("env2.json"),
              "QPT_SEED=11") == 0);
    CHECK(load_json(dir.file("env2.json")).at("records") != with_flag.at("records"));
}

TEST_CASE("measure subcommand reconstructs branches and keeps determinism") {
    TempDir dir;
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    InstrumentModel model({{"0", KrausSet({p0})}, {"1", KrausSet({p1})}});
    save_json(dir.file("inst.json"), instrument_to_json(model));

    CHECK(run("measure " + dir.file("inst.json") + " --branch 0 --trials exact --out " +
              dir.file("b0.json") + " --dataset-out " + dir.file("d0.json")) == 0);
    ChannelFile b0 = channel_from_json(load_json(dir.file("b0.json")));
    CHECK(channel_distance(b0.as_superoperator(), to_superoperator(KrausSet({p0}))) < 1e-9);
    CHECK(run("verify " + dir.file("d0.json")) == 0);

    CHECK(run("measure " + dir.file("inst.json") + " --all-branches --trials 5000 --seed 2 --out " +
              dir.file("all_")) == 0);
    CHECK(run("measure " + dir.file("inst.json") + " --all-branches --trials 5000 --seed 2 --out " +
              dir.file("rerun_")) == 0);
    CHECK(slurp(dir.file("all_0.json")) != "");
    // identical seeds give identical bytes modulo the output path in the manifest
    Json a = load_json(dir.file("all_1.json"));
    Json b = load_json(dir.file("rerun_1.json"));
    CHECK(a.at("matrix") == b.at("matrix"));

    CHECK(run("measure " + dir.file("inst.json") + " --branch nope --trials exact --out " +
              dir.file("x.json")) == 1);
}

} // TEST_SUITE
