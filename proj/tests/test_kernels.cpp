#include <gtest/gtest.h>

#include <thread>

#include "test_support.hpp"

using namespace nhdmp;
using namespace nhdmp::testing;

TEST(Kernels, ValidationNamesStepAndRow) {
    auto ref = ReferenceSpace::uniform(2);
    try {
        Process::from_steps(ref, {KernelMatrix::from_rows({{0.5, 0.5}, {0.5, 0.4}})});
        FAIL() << "expected non_stochastic";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::non_stochastic);
        EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("step 0"), std::string::npos) << e.what();
    }
}

TEST(Kernels, MeasurabilityViolationDetected) {
    ReferenceSpace ref({0.5, 0.5, 0.0});
    // Row 0 is in supp(mu) but sends mass to the null state 2.
    auto m = KernelMatrix::from_rows({{0.5, 0.25, 0.25}, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}});
    try {
        Process::from_steps(ref, {m});
        FAIL() << "expected measurability";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::measurability);
    }
    // Null rows may go anywhere.
    EXPECT_NO_THROW(Process::from_steps(ref, {KernelMatrix::from_rows({{0.5, 0.5, 0}, {1, 0, 0}, {0.2, 0.3, 0.5}})}));
}

TEST(Kernels, StepOutsideRangeIsUnavailable) {
    Rng rng(1);
    const auto p = random_process(rng, 3, 4);
    EXPECT_TRUE(p.has_step(3));
    EXPECT_FALSE(p.has_step(4));
    try {
        p.step(4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::step_unavailable);
    }
    EXPECT_THROW(compose(p, 2, 2), Error);
}

TEST(Kernels, KolmogorovChapmanOnRandomProcesses) {
    Rng rng(2);
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = pick(rng, 1, 6);
        const auto p = random_process(rng, n, 8, true, true);
        const Time k = pick(rng, 0, 5);
        const Time nn = pick(rng, k + 2, 8);
        const Time m = pick(rng, k + 1, nn - 1);
        const auto lhs = compose(p, k, nn).to_rows();
        const auto rhs = naive_product(compose(p, k, m).to_rows(), compose(p, m, nn).to_rows());
        EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12);
    }
}

TEST(Kernels, PushForwardFunctionDuality) {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = pick(rng, 1, 6);
        const auto p = random_process(rng, n, 6, true);
        const auto lam = random_in_m(rng, p.ref());
        std::vector<double> f(n);
        for (auto& x : f) x = uniform(rng, -2.0, 2.0);
        const Time nn = pick(rng, 1, 6);
        const double lhs = pairing(push_forward(p, 0, nn, lam.view()), f);
        const double rhs = pairing(lam.view(), apply_function(p, 0, nn, f));
        EXPECT_NEAR(lhs, rhs, 1e-10);
    }
}

TEST(Kernels, PushForwardStaysInM) {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_process(rng, 5, 5, true);
        const auto pushed = push_forward(p, 0, 5, random_in_m(rng, p.ref()));
        EXPECT_TRUE(in_m(pushed, p.ref()));
    }
}

TEST(Kernels, ComposeIsReproducibleAcrossThreads) {
    const auto p = drift_chain_process(40);
    const auto reference = compose(drift_chain_process(40), 1, 30).to_rows();
    std::vector<std::vector<std::vector<double>>> seen(4);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) threads.emplace_back([&, t] { seen[t] = compose(p, 1, 30).to_rows(); });
    for (auto& th : threads) th.join();
    for (const auto& s : seen) EXPECT_EQ(s, reference);
}

TEST(Kernels, BlockExampleStructure) {
    const auto p = block_example(0.7);
    EXPECT_TRUE(p.is_homogeneous());
    EXPECT_EQ(p.kind(), "block_example");
    EXPECT_DOUBLE_EQ(p.step(5)(0, 0), 0.7);
    EXPECT_DOUBLE_EQ(p.step(5)(2, 2), 1.0);
    EXPECT_THROW(block_example(1.0), Error);
    // The block acts on (1/2, 1/2) trivially; the difference of rows shrinks by 2p-1.
    const auto m = compose(p, 0, 3);
    EXPECT_NEAR(m(0, 0) - m(1, 0), std::pow(0.4, 3), 1e-15);
}

TEST(Kernels, DriftChainRowsAndCoefficients) {
    for (Time k = 1; k <= 60; ++k) {
        const auto m = drift_chain_matrix(k, 80);
        double col_min = 1.0;
        for (std::size_t i = 0; i < 80; ++i) {
            EXPECT_NEAR(m.row_sum(i), 1.0, 1e-12);
            col_min = std::min(col_min, m(i, k));
            const auto c = drift_chain_coefficients(k, i);
            EXPECT_NEAR(c.q_prev, static_cast<double>(i) / static_cast<double>(k + i), 1e-14);
        }
        EXPECT_GE(col_min, (k - 1.0) / k - 1e-15);
    }
    // Hand-derived entries for k = 2. row 0: diagonal 1/2, column 2 gets 1/2
    const auto m2 = drift_chain_matrix(2, 6);
    EXPECT_DOUBLE_EQ(m2(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(m2(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(m2(0, 2), 0.5);
    // row 1 = label k-1: column 1 gets (1/3)(1/2 + 1) = 1/2, column 2 gets 1/2
    EXPECT_DOUBLE_EQ(m2(1, 1), 0.5);
    EXPECT_DOUBLE_EQ(m2(1, 2), 0.5);
    // row 2 = label k: column 1 gets (1/4)(1), column 2 gets 1/2 + 1/4
    EXPECT_DOUBLE_EQ(m2(2, 1), 0.25);
    EXPECT_DOUBLE_EQ(m2(2, 2), 0.75);
}

TEST(Kernels, DriftChainLayoutsAgree) {
    const auto dense = drift_chain_matrix(7, 50, KernelMatrix::Layout::dense);
    const auto sparse = drift_chain_matrix(7, 50, KernelMatrix::Layout::sparse);
    EXPECT_EQ(dense.to_rows(), sparse.to_rows());
    EXPECT_EQ((dense * dense).to_rows(), (sparse * sparse).to_rows());
}

TEST(Kernels, DriftChainProcessRangeAndReference) {
    const auto p = drift_chain_process(16);
    EXPECT_EQ(p.first_time(), 1u);
    EXPECT_EQ(*p.last_time(), 14u);
    EXPECT_FALSE(p.has_step(0));
    EXPECT_EQ(p.ref().support().count(), 16u);
    EXPECT_NEAR(p.ref().mu()[1] / p.ref().mu()[0], 1.0, 1e-15);   // Poisson(1)
    EXPECT_NEAR(p.ref().mu()[3] / p.ref().mu()[2], 1.0 / 3.0, 1e-15);
    EXPECT_THROW(drift_chain_matrix(5, 6), Error);
    EXPECT_THROW(truncated_poisson(2000, 1.0), Error);
    EXPECT_NO_THROW(drift_chain_process(3000, 0.0));
}
