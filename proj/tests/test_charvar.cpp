#include "hcg/charvar.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hcg;
using namespace testing_support;

namespace {

TraceTriple rand_triple(std::mt19937_64& rng) { return {rand_complex(rng, 4), rand_complex(rng, 4), rand_complex(rng, 4)}; }

// commutator trace straight from the matrices
cd commutator_trace(const RepresentationPair& p) {
    return (p.xi * p.eta * p.xi.inverse() * p.eta.inverse()).trace();
}

}  // namespace

TEST(Mu, Examples) {
    EXPECT_EQ(mu_of({3, 3, 3}), cd(0));
    EXPECT_EQ(mu_of({2, 2, 2}), cd(4));
    EXPECT_EQ(mu_of({0, 0, 0}), cd(0));
    TraceTriple t(1, 2, 3);
    EXPECT_EQ(t.mu(), mu_of(t));
}

TEST(Reducible, Examples) {
    EXPECT_TRUE(is_reducible({2, 2, 2}));
    EXPECT_FALSE(is_reducible({3, 3, 3}));
    EXPECT_TRUE(is_reducible({2, 0, 0}));
    EXPECT_FALSE(is_reducible({3, 0, 0}));
}

TEST(NeighborTrace, Examples) {
    TraceTriple n = neighbor_trace({3, 3, 3}, Slot::Z);
    EXPECT_EQ(n.x, cd(3));
    EXPECT_EQ(n.y, cd(3));
    EXPECT_EQ(n.z, cd(6));
    TraceTriple back = neighbor_trace(n, Slot::Z);
    EXPECT_EQ(back.z, cd(3));
}

TEST(NeighborTrace, InvolutiveAndPreservesMu) {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 500; ++k) {
        TraceTriple t = rand_triple(rng);
        for (Slot s : {Slot::X, Slot::Y, Slot::Z}) {
            TraceTriple n = neighbor_trace(t, s);
            TraceTriple b = neighbor_trace(n, s);
            EXPECT_LT(std::abs(b[s] - t[s]), 1e-12);
            double scale = std::max(1.0, std::abs(t.x * t.y * t.z));
            EXPECT_LT(std::abs(mu_of(n) - mu_of(t)) / scale, 1e-12);
        }
    }
}

TEST(Realize, NormalFormExample) {
    RepresentationPair p = realize({3, 3, 3});
    EXPECT_LT(max_abs(p.xi.mat() - (Mat2() << 3, -1, 1, 0).finished()), 1e-15);
    cd zeta = p.eta(0, 1);
    EXPECT_LT(std::abs(zeta * zeta - 3.0 * zeta + 1.0), 1e-14);
    EXPECT_GE(std::abs(zeta), 1.0);
    EXPECT_NEAR(p.eta(1, 1).real(), 3.0, 1e-15);
    EXPECT_LT(std::abs(p.eta(1, 0) + 1.0 / zeta), 1e-15);
    TraceTriple t = traces_of(p);
    EXPECT_LT(std::abs(t.x - 3.0), 1e-12);
    EXPECT_LT(std::abs(t.y - 3.0), 1e-12);
    EXPECT_LT(std::abs(t.z - 3.0), 1e-12);
}

TEST(Realize, ReducibleRejected) {
    try {
        realize({2, 2, 2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ReducibleTriple);
    }
}

TEST(Realize, RandomTriplesRoundTrip) {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 1000; ++k) {
        TraceTriple t = rand_triple(rng);
        if (is_reducible(t)) continue;
        RepresentationPair p = realize(t);
        TraceTriple r = traces_of(p);
        EXPECT_LT(std::abs(r.x - t.x), 1e-10);
        EXPECT_LT(std::abs(r.y - t.y), 1e-10);
        EXPECT_LT(std::abs(r.z - t.z), 1e-10);
        EXPECT_LT(std::abs(p.xi.mat().determinant() - 1.0), 1e-12);
        EXPECT_LT(std::abs(p.eta.mat().determinant() - 1.0), 1e-12);
    }
}

TEST(Fricke, CommutatorIdentity) {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 1000; ++k) {
        // arbitrary matrices, not just normal forms
        RepresentationPair p{rand_isometry(rng), rand_isometry(rng)};
        TraceTriple t = traces_of(p);
        cd lhs = commutator_trace(p);
        double scale = std::max(1.0, std::abs(t.x * t.y * t.z));
        EXPECT_LT(std::abs(lhs - (mu_of(t) - 2.0)) / scale, 1e-9);
    }
}

TEST(Words, Reduction) {
    EXPECT_EQ(reduce_word("XxY"), "Y");
    EXPECT_EQ(reduce_word("XYyx"), "");
    EXPECT_EQ(reduce_word("yYXXx"), "X");
    EXPECT_EQ(inverse_word("XY"), "yx");
    EXPECT_EQ(concat("XY", "yx"), "");
    EXPECT_THROW(reduce_word("XZ"), Error);
}

TEST(Words, ImageExamples) {
    RepresentationPair p = realize({3, 3, 3});
    EXPECT_LT(max_abs(word_image(p, "X").mat() - p.xi.mat()), 1e-15);
    EXPECT_NEAR(std::abs(word_image(p, "XY").trace() - 3.0), 0.0, 1e-10);
    EXPECT_LT(max_abs(word_image(p, "Xx").mat() - Mat2::Identity()), 1e-15);
    EXPECT_LT(max_abs(word_image(p, "").mat() - Mat2::Identity()), 1e-15);
}

TEST(Words, MultiplicativeAndConjugationInvariant) {
    std::mt19937_64 rng(24);
    const char letters[] = "XxYy";
    std::uniform_int_distribution<int> L(0, 3), len(0, 6);
    for (int k = 0; k < 200; ++k) {
        TraceTriple t = rand_triple(rng);
        if (is_reducible(t)) continue;
        RepresentationPair p = realize(t);
        std::string a, b;
        for (int i = len(rng); i > 0; --i) a += letters[L(rng)];
        for (int i = len(rng); i > 0; --i) b += letters[L(rng)];
        Isometry ab = word_image(p, a + b);
        Isometry prod = word_image(p, a) * word_image(p, b);
        double scale = std::max(1.0, max_abs(prod.mat()));
        EXPECT_LT(max_abs(ab.mat() - prod.mat()) / scale, 1e-10);
        Isometry g = rand_isometry(rng);
        RepresentationPair q = conjugate(p, g);
        cd t0 = word_image(p, a + b).trace(), t1 = word_image(q, a + b).trace();
        EXPECT_LT(std::abs(t0 - t1) / std::max(1.0, std::abs(t0)), 1e-9);
    }
}
