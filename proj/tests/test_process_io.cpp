#include <gtest/gtest.h>

#include <filesystem>

#include "test_support.hpp"

using namespace nhdmp;
using namespace nhdmp::testing;

namespace {

ErrorKind kind_of(const nlohmann::json& j) {
    try {
        process_from_json(j);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for " << j.dump();
    return ErrorKind::numerical;
}

} // namespace

TEST(ProcessIo, ExplicitRoundTripIsExact) {
    Rng rng(21);
    const auto p = random_process(rng, 4, 3, true);
    const auto back = process_from_json(process_to_json(p));
    EXPECT_EQ(back.ref().mu().weights(), p.ref().mu().weights());
    for (Time k = 0; k < 3; ++k) EXPECT_EQ(back.step(k).matrix().to_rows(), p.step(k).matrix().to_rows());
    EXPECT_FALSE(back.has_step(3));
}

TEST(ProcessIo, GeneratorKindsRegenerate) {
    const auto block = process_from_json(process_to_json(block_example(0.3)));
    EXPECT_EQ(block.kind(), "block_example");
    EXPECT_DOUBLE_EQ(block.step(9)(0, 0), 0.3);
    const auto drift = process_from_json(process_to_json(drift_chain_process(12, 2.0)));
    EXPECT_EQ(drift.kind(), "drift_chain");
    EXPECT_EQ(drift.step(4).matrix().to_rows(), drift_chain_matrix(4, 12).to_rows());
    EXPECT_EQ(drift.ref().mu().weights(), truncated_poisson(12, 2.0).mu().weights());
}

TEST(ProcessIo, HomogeneousAndOffsetExplicit) {
    const auto h = process_from_json(process_to_json(identity_process(3)));
    EXPECT_TRUE(h.is_homogeneous());
    EXPECT_TRUE(h.has_step(1000));
    auto ref = ReferenceSpace::uniform(2);
    const auto p = Process::from_steps(ref, {KernelMatrix::from_rows({{0.5, 0.5}, {0.1, 0.9}})}, 5);
    const auto back = process_from_json(process_to_json(p));
    EXPECT_EQ(back.first_time(), 5u);
    EXPECT_FALSE(back.has_step(4));
}

TEST(ProcessIo, SchemaAndValidationErrors) {
    const auto j = [](const char* text) { return nlohmann::json::parse(text); };
    EXPECT_EQ(kind_of(j(R"({"kind": "explicit"})")), ErrorKind::schema);
    EXPECT_EQ(kind_of(j(R"({"n_states": 2, "kind": "weird"})")), ErrorKind::schema);
    EXPECT_EQ(kind_of(j(R"({"n_states": 2, "kind": "explicit", "mu": [0.5, 0.5], "steps": [[[1.0]]]})")),
              ErrorKind::schema);
    EXPECT_EQ(kind_of(j(R"({"n_states": 2, "kind": "explicit", "mu": [0.5, 0.5],
                            "steps": [[[0.5, 0.4], [0.5, 0.5]]]})")),
              ErrorKind::non_stochastic);
    EXPECT_EQ(kind_of(j(R"({"n_states": 2, "kind": "explicit", "mu": [1.0, 0.0],
                            "steps": [[[0.5, 0.5], [0.5, 0.5]]]})")),
              ErrorKind::measurability);
    EXPECT_EQ(kind_of(j(R"({"n_states": 4, "kind": "block_example", "params": {"p": "x"}})")), ErrorKind::schema);
    EXPECT_EQ(kind_of(j(R"({"n_states": 4, "kind": "block_example", "params": {"p": 0.5}, "mu": [1, 0, 0, 0]})")),
              ErrorKind::schema);
    EXPECT_EQ(kind_of(j(R"({"n_states": 2, "kind": "explicit", "mu": [0.5, 0.5], "steps": []})")),
              ErrorKind::schema);
}

TEST(ProcessIo, FilesOnDisk) {
    const auto dir = std::filesystem::temp_directory_path() / "nhdmp_io_test";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "block.json").string();
    save_process(block_example(0.6), path);
    EXPECT_DOUBLE_EQ(load_process(path).step(0)(0, 1), 0.4);
    try {
        load_process((dir / "missing.json").string());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::schema);
    }
    std::filesystem::remove_all(dir);
}

TEST(ProcessIo, SamplesLoad) {
    const std::string dir = NHDMP_SAMPLES_DIR;
    EXPECT_NO_THROW(load_process(dir + "/block_example.json"));
    EXPECT_NO_THROW(load_process(dir + "/explicit_chain.json"));
    try {
        load_process(dir + "/bad_row_sum.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_stochastic);
        EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
    }
    try {
        load_process(dir + "/bad_measurability.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::measurability);
    }
}
