#include "hcg/bqtree.hpp"
#include "hcg/carrier.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

using namespace hcg;
using namespace testing_support;

namespace {

const Slot kAll[3] = {Slot::X, Slot::Y, Slot::Z};

std::string random_address(std::mt19937_64& rng, int len) {
    std::string a;
    std::uniform_int_distribution<int> pick(0, 2);
    while (static_cast<int>(a.size()) < len) {
        char m = static_cast<char>('A' + pick(rng));
        if (!a.empty() && a.back() == m) continue;
        a.push_back(m);
    }
    return a;
}

// the two word triples share two slots up to inversion
int shared_up_to_inverse(const TreeVertex& v, const TreeVertex& w) {
    int n = 0;
    for (const std::string& a : v.words)
        for (const std::string& b : w.words)
            if (a == b || a == inverse_word(b)) {
                ++n;
                break;
            }
    return n;
}

}  // namespace

TEST(Tree, RootVertex) {
    TreeVertex r = root_vertex({3, 3, 3});
    EXPECT_EQ(r.address, "");
    EXPECT_EQ(r.words[0], "X");
    EXPECT_EQ(r.words[1], "Y");
    EXPECT_EQ(r.words[2], "yx");
    EXPECT_EQ(r.traces.z, cd(3));
}

TEST(Tree, RootTracesRoundTrip) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
        TraceTriple t(rand_complex(rng, 4), rand_complex(rng, 4), rand_complex(rng, 4));
        if (is_reducible(t)) continue;
        RepresentationPair p = realize(t);
        TreeVertex r = root_vertex(t);
        for (Slot s : kAll)
            EXPECT_LT(std::abs(word_image(p, r.words[static_cast<int>(s)]).trace() - t[s]), 1e-9);
    }
}

TEST(Tree, NeighborExample) {
    TreeVertex n = neighbor(root_vertex({3, 3, 3}), Slot::Z);
    EXPECT_EQ(n.address, "C");
    EXPECT_EQ(n.words[0], "X");
    EXPECT_EQ(n.words[1], "y");
    EXPECT_EQ(n.words[2], "Yx");
    EXPECT_EQ(n.traces.x, cd(3));
    EXPECT_EQ(n.traces.y, cd(3));
    EXPECT_EQ(n.traces.z, cd(6));
    EXPECT_EQ(shared_up_to_inverse(root_vertex({3, 3, 3}), n), 2);
}

TEST(Tree, InvolutionAndConsistency) {
    std::mt19937_64 rng(12);
    TraceTriple t(cd(2.5, 0.7), cd(3.1, -0.4), cd(-2.2, 1.3));
    RepresentationPair p = realize(t);
    for (int k = 0; k < 200; ++k) {
        std::string a = random_address(rng, 1 + static_cast<int>(rng() % 20));
        TreeVertex v = vertex_at(t, a);
        EXPECT_EQ(v.address, a);
        for (Slot s : kAll) {
            TreeVertex w = neighbor(v, s);
            TreeVertex back = neighbor(w, s);
            EXPECT_EQ(back.address, v.address);
            EXPECT_EQ(back.words, v.words);
            // the Markoff move z' = xy - z cancels, so compare against the size of xy
            int i = static_cast<int>(s);
            double scale = std::abs(v.traces[static_cast<Slot>((i + 1) % 3)] * v.traces[static_cast<Slot>((i + 2) % 3)]);
            if (scale < 1e150)  // traces grow doubly exponentially along some walks
                EXPECT_LT(std::abs(back.traces[s] - v.traces[s]), 1e-12 * std::max(1.0, scale));
            EXPECT_GE(shared_up_to_inverse(v, w), 2);
        }
        // parent of a child is the vertex itself
        TreeVertex parent = vertex_at(t, a.substr(0, a.size() - 1));
        EXPECT_EQ(neighbor(v, slot_of_move(a.back())).address, parent.address);
        // product relation and trace bookkeeping on short words
        if (a.size() <= 6) {
            EXPECT_EQ(reduce_word(v.words[0] + v.words[1] + v.words[2]), "");
            for (Slot s : kAll) {
                cd tr = word_image(p, v.words[static_cast<int>(s)]).trace();
                EXPECT_LT(std::abs(tr - v.traces[s]), 1e-7 * std::max(1.0, std::abs(tr)));
            }
        }
    }
}

TEST(Tree, MuInvariance) {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 5; ++k) {
        TraceTriple t(rand_complex(rng, 3), rand_complex(rng, 3), rand_complex(rng, 3));
        cd mu = t.mu();
        for (const TreeVertex& v : enumerate_tree(t, 6)) {
            double scale = std::max({1.0, std::norm(v.traces.x), std::norm(v.traces.y), std::norm(v.traces.z)});
            EXPECT_LT(std::abs(v.traces.mu() - mu) / scale, 1e-10);
        }
    }
}

TEST(Tree, Enumerate) {
    std::vector<TreeVertex> vs = enumerate_tree({3, 3, 3}, 3);
    EXPECT_EQ(vs.size(), 1u + 3u + 6u + 12u);
    std::set<std::string> seen;
    for (const TreeVertex& v : vs) EXPECT_TRUE(seen.insert(v.address).second);
}

TEST(Fibonacci, Values) {
    EXPECT_EQ(fibonacci_value("", Slot::X), 1);
    EXPECT_EQ(fibonacci_value("", Slot::Y), 1);
    EXPECT_EQ(fibonacci_value("", Slot::Z), 2);
    EXPECT_EQ(fibonacci_value("C", Slot::Z), 2);
    EXPECT_EQ(fibonacci_value("CA", Slot::X), 3);
    EXPECT_EQ(fibonacci_value("CAB", Slot::Y), 5);
    EXPECT_EQ(fibonacci_value("CABA", Slot::X), 7);
    // sum rule everywhere
    std::mt19937_64 rng(14);
    for (int k = 0; k < 100; ++k) {
        std::string a = random_address(rng, 1 + static_cast<int>(rng() % 12));
        Slot s = slot_of_move(a.back());
        std::string p = a.substr(0, a.size() - 1);
        EXPECT_EQ(fibonacci_value(a, s), fibonacci_value(p, static_cast<Slot>((static_cast<int>(s) + 1) % 3)) +
                                             fibonacci_value(p, static_cast<Slot>((static_cast<int>(s) + 2) % 3)));
    }
}

TEST(Fibonacci, GrowthLowerBound) {
    // min over depth-n vertices of log+|trace| / F stays away from zero
    for (TraceTriple t : {TraceTriple(3, 3, 3), TraceTriple(cd(2.5, 1), 3, cd(2.8, -0.5))}) {
        std::vector<TreeVertex> vs = enumerate_tree(t, 10);
        std::map<int, double> lo;
        for (const TreeVertex& v : vs) {
            if (v.depth() < 5) continue;
            for (Slot s : kAll) {
                double r = std::max(0.0, std::log(std::abs(v.traces[s]))) / fibonacci_value(v.address, s);
                auto it = lo.find(v.depth());
                if (it == lo.end() || r < it->second) lo[v.depth()] = r;
            }
        }
        for (auto [d, r] : lo) EXPECT_GT(r, 0.05) << "depth " << d;
    }
}

TEST(Orientation, Values) {
    TreeVertex r = root_vertex({3, 3, 3});
    EXPECT_DOUBLE_EQ(orientation_value(r, Slot::Z, OrientationKind::TraceModulus, nullptr), 3.0);
    EXPECT_NEAR(orientation_value(r, Slot::X, OrientationKind::RealLength, nullptr), 1.9248473002, 1e-9);
    RepresentationPair p = realize({3, 3, 3});
    EXPECT_NEAR(orientation_value(r, Slot::X, OrientationKind::RealLength, &p), 1.9248473002, 1e-9);
    EXPECT_THROW(orientation_value(r, Slot::X, OrientationKind::Angle, nullptr), Error);
    EXPECT_THROW(orientation_value(r, Slot::X, OrientationKind::SteinerLength, nullptr), Error);
}

TEST(Orientation, NonLoxodromic) {
    TraceTriple t(1, 5, 5);
    RepresentationPair p = realize(t);
    try {
        orientation_value(root_vertex(t), Slot::Y, OrientationKind::Angle, &p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonLoxodromicPrimitive);
    }
}

TEST(Orientation, AngleApproachesPi) {
    // the slot replaced last has the largest trace; its angle tends to pi along a path
    TraceTriple t(3, 3, 3);
    RepresentationPair p = realize(t);
    std::string path = "ABABABAB";
    double prev = 0.0;
    for (int d = 2; d <= 8; ++d) {
        TreeVertex v = vertex_at(t, path.substr(0, d));
        Slot s = slot_of_move(path[d - 1]);
        double a = orientation_value(v, s, OrientationKind::Angle, &p);
        EXPECT_GT(a, prev);
        prev = a;
    }
    EXPECT_GT(prev, kPi - 1e-3);
}

TEST(Orientation, OrientEdge) {
    TraceTriple t(3, 3, 3);
    TreeVertex r = root_vertex(t);
    EXPECT_EQ(orient_edge(r, Slot::Z, OrientationKind::TraceModulus, nullptr), "");
    EXPECT_EQ(orient_edge(r, Slot::Z, OrientationKind::RealLength, nullptr), "");
    EXPECT_EQ(orient_edge(vertex_at(t, "C"), Slot::Z, OrientationKind::TraceModulus, nullptr), "");
    // a tie goes to the smaller address
    TraceTriple tie(3, 3, 4.5);  // z' = 9 - 4.5 = 4.5
    EXPECT_EQ(orient_edge(root_vertex(tie), Slot::Z, OrientationKind::TraceModulus, nullptr), "");
    EXPECT_EQ(orient_edge(vertex_at(tie, "C"), Slot::Z, OrientationKind::TraceModulus, nullptr), "");
}

TEST(Orientation, AgreementAwayFromRoot) {
    // trace modulus and real length agree on every edge beyond a small depth
    for (TraceTriple t : {TraceTriple(3, 3, 3), TraceTriple(cd(2.5, 1), 3, cd(2.8, -0.5)),
                          TraceTriple(cd(3, 0.3), cd(3, -0.2), cd(3.1, 0.1))}) {
        int last_disagreement = -1;
        for (const TreeVertex& v : enumerate_tree(t, 8))
            for (Slot s : kAll) {
                if (!v.address.empty() && v.address.back() == move_letter(s)) continue;  // parent edge
                if (orient_edge(v, s, OrientationKind::TraceModulus, nullptr) !=
                    orient_edge(v, s, OrientationKind::RealLength, nullptr))
                    last_disagreement = std::max(last_disagreement, v.depth());
            }
        EXPECT_LT(last_disagreement, 4);
    }
}

TEST(Bq, Fixtures) {
    BqVerdict a = bq_test({3, 3, 3}, 30);
    EXPECT_EQ(a.status, BqStatus::Accept);
    EXPECT_FALSE(a.subtree.empty());
    EXPECT_EQ(a.sinks, std::vector<std::string>{""});

    BqVerdict e = bq_test({1, 5, 5}, 30);
    EXPECT_EQ(e.status, BqStatus::RejectElliptic);
    EXPECT_EQ(e.witness, "");
    EXPECT_EQ(e.witness_slot, Slot::X);

    EXPECT_EQ(bq_test({2, 2, 2}, 30).status, BqStatus::RejectReducible);

    for (int cap : {5, 10, 20, 30}) {
        BqStatus s = bq_test({cd(0.5, 0.1), 5, 5}, cap).status;
        EXPECT_NE(s, BqStatus::Accept);
    }
}

TEST(Bq, WitnessDeeper) {
    // (3, 4, 10): z' = 12 - 10 = 2 lies in [-2, 2]
    BqVerdict v = bq_test({3, 4, 10}, 30);
    EXPECT_EQ(v.status, BqStatus::RejectElliptic);
    EXPECT_EQ(v.witness, "C");
    EXPECT_EQ(v.witness_slot, Slot::Z);
}

TEST(Bq, GuardBand) {
    BqVerdict v = bq_test({cd(2.0 + 5e-9, 0), 5, 5}, 30);
    EXPECT_EQ(v.status, BqStatus::Indeterminate);
    EXPECT_TRUE(v.near_boundary);
}

TEST(Bq, BruteForceDepth12) {
    std::vector<TreeVertex> vs = enumerate_tree({3, 3, 3}, 12);
    std::map<int, double> lo;
    for (const TreeVertex& v : vs)
        for (Slot s : kAll) {
            cd x = v.traces[s];
            EXPECT_EQ(x.imag(), 0.0);
            EXPECT_GE(x.real(), 3.0);
            if (v.depth() == 0) continue;
            double m = std::abs(v.traces[slot_of_move(v.address.back())]);  // the new slot at this depth
            auto it = lo.find(v.depth());
            if (it == lo.end() || m < it->second) lo[v.depth()] = m;
        }
    double prev = 3.0;
    for (auto [d, m] : lo) {
        EXPECT_GT(m, prev) << "depth " << d;
        prev = m;
    }
}

TEST(Subtree, TraceModulusRoot) {
    AttractingSubtree s = attracting_subtree({3, 3, 3}, OrientationKind::TraceModulus);
    EXPECT_EQ(s.sinks, std::vector<std::string>{""});
    EXPECT_TRUE(std::find(s.vertices.begin(), s.vertices.end(), "") != s.vertices.end());
}

TEST(Subtree, AllKindsFiniteAndContainSinks) {
    for (TraceTriple t : {TraceTriple(3, 3, 3), TraceTriple(3, 4, 30), TraceTriple(cd(4, 0.5), 5, cd(22, -1)),
                          TraceTriple(cd(2.5, 1), 3, cd(2.8, -0.5))}) {
        RepresentationPair p = realize(t);
        std::set<std::string> uni;
        for (OrientationKind k : {OrientationKind::TraceModulus, OrientationKind::RealLength, OrientationKind::Angle,
                                  OrientationKind::SteinerLength}) {
            AttractingSubtree s = attracting_subtree(t, k, 30, {}, &p);
            EXPECT_FALSE(s.sinks.empty()) << to_string(k);
            for (const std::string& a : s.sinks)
                EXPECT_TRUE(std::binary_search(s.vertices.begin(), s.vertices.end(), a));
            uni.insert(s.vertices.begin(), s.vertices.end());
            // every sink really is a sink
            for (const std::string& a : s.sinks) {
                TreeVertex v = vertex_at(t, a);
                for (Slot sl : kAll) EXPECT_EQ(orient_edge(v, sl, k, &p), a) << to_string(k) << " at '" << a << "'";
            }
        }
        EXPECT_LT(uni.size(), 100u);
    }
}

TEST(Subtree, SinkAwayFromRoot) {
    // (3, 4, 30): the Z move gives 12 - 30 = -18, so the trace sink is "C"
    AttractingSubtree s = attracting_subtree({3, 4, 30}, OrientationKind::TraceModulus);
    EXPECT_EQ(s.sinks, std::vector<std::string>{"C"});
}

TEST(Convergence, HexagonTendsToDegenerate) {
    // along depth-increasing paths cosh l(gamma) of the slot just replaced tends to 1 and the other two to -1
    TraceTriple t(3, 3, 3);
    RepresentationPair p = realize(t);
    for (std::string path : {"ABABABABAB", "BCBCBCBCBC", "CACACACACA"}) {
        auto errors = [&](int d) {
            TreeVertex v = vertex_at(t, path.substr(0, d));
            AxesTriple ax = axes_for_vertex(p, v);
            Slot z = slot_of_move(path[d - 1]);
            double ez = std::abs(gamma_cosh(ax, z) - 1.0), ex = 0.0;
            for (Slot s : kAll)
                if (s != z) ex = std::max(ex, std::abs(gamma_cosh(ax, s) + 1.0));
            return std::make_pair(ez, ex);
        };
        auto [z5, x5] = errors(5);
        auto [z10, x10] = errors(10);
        EXPECT_LT(z10, 0.1 * z5) << path;
        EXPECT_LT(x10, 0.1 * x5) << path;
        double prev = 1e9;
        for (int d = 2; d <= 10; ++d) {
            double e = errors(d).first;
            EXPECT_LT(e, prev) << path << " depth " << d;
            prev = e;
        }
    }
}
