#include "hcg/carrier.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hcg;
using namespace testing_support;

namespace {

const Slot kAll[3] = {Slot::X, Slot::Y, Slot::Z};

double rel(const Mat2& a, const Mat2& b) {
    return (a - b).cwiseAbs().maxCoeff() / std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
}

std::vector<TraceTriple> sample_triples() {
    return {TraceTriple(3, 3, 3), TraceTriple(cd(2.5, 1), 3, cd(2.8, -0.5)), TraceTriple(-3, -3, -8),
            TraceTriple(cd(3, 0.3), cd(3, -0.2), cd(3.1, 0.1)), TraceTriple(cd(1.5, 2), cd(-2, 1), cd(0.5, -3))};
}

// reducible: upper triangular pair fixing infinity
RepresentationPair reducible_pair() {
    return {Isometry(2.0, 1.0, 0.0, 0.5), Isometry(3.0, -1.0, 0.0, 1.0 / 3.0)};
}

bool is_real_plane_orthogonal(const Geodesic& g) {
    if (g.start.is_inf() || g.end.is_inf()) return false;
    return std::abs(g.start.value() - std::conj(g.end.value())) < 1e-9;
}

}  // namespace

TEST(Axes, Relations) {
    for (const TraceTriple& t : sample_triples()) {
        RepresentationPair p = realize(t);
        for (const TreeVertex& v : enumerate_tree(t, 2)) {
            AxesTriple a = axes_for_vertex(p, v);
            EXPECT_LT(a.residual, 1e-9);
            Isometry x = word_image(p, v.words[0]), y = word_image(p, v.words[1]), z = word_image(p, v.words[2]);
            EXPECT_LT(rel(x.mat(), (a.r[1] * a.r[2]).mat()), 1e-9);
            EXPECT_LT(rel(y.mat(), (a.r[2] * a.r[0]).mat()), 1e-9);
            EXPECT_LT(rel(z.mat(), (-(a.r[0] * a.r[1])).mat()), 1e-9);
            for (int i = 0; i < 3; ++i) EXPECT_LT(rel((a.r[i] * a.r[i]).mat(), -Mat2::Identity()), 1e-9);
        }
    }
}

TEST(Axes, MatchesCoxeterAtRoot) {
    for (const TraceTriple& t : sample_triples()) {
        RepresentationPair p = realize(t);
        AxesTriple a = axes_for_vertex(p, root_vertex(t));
        CoxeterTriple c = coxeter_decomposition(p.xi, p.eta);
        EXPECT_LT(rel(a.r[2].mat(), c.r2.mat()), 1e-8);
        EXPECT_LT(rel(a.r[0].mat(), c.r1.mat()), 1e-8);
        EXPECT_LT(rel(a.r[1].mat(), c.r3.mat()), 1e-8);
    }
}

TEST(Axes, ReflectionRule) {
    // replacing slot W keeps gamma_W and reflects the next axis by r_W
    for (const TraceTriple& t : sample_triples()) {
        RepresentationPair p = realize(t);
        for (const TreeVertex& v : enumerate_tree(t, 2)) {
            AxesTriple a = axes_for_vertex(p, v);
            for (Slot s : kAll) {
                int w = static_cast<int>(s), n = (w + 1) % 3, m = (w + 2) % 3;
                AxesTriple b = axes_for_vertex(p, neighbor(v, s));
                EXPECT_TRUE(same_geodesic(b.axes[w], a.axes[w], 1e-8, false));
                EXPECT_TRUE(same_geodesic(b.axes[n], mobius_apply(a.r[w], a.axes[n]), 1e-8, false));
                EXPECT_TRUE(same_geodesic(b.axes[m], a.axes[m], 1e-8, false));
            }
        }
    }
}

TEST(Axes, GammaCoshMatchesHexagon) {
    // 2 cosh l(gamma_W) = -tr(r_delta(U) r_delta(V)) equals the cosine rule in the traces
    RepresentationPair p = realize({3, 3, 3});
    AxesTriple a = axes_for_vertex(p, root_vertex({3, 3, 3}));
    // cosh l(delta) = 3/2 up to sign; cosh l(gamma) = (c c + c) / (s s) with c = -3/2, s^2 = 5/4
    for (Slot s : kAll) EXPECT_NEAR(std::abs(gamma_cosh(a, s)), (2.25 - 1.5) / 1.25, 1e-12);
}

TEST(Axes, Errors) {
    RepresentationPair r = reducible_pair();
    try {
        axes_for_vertex(r, root_vertex(traces_of(r)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CommonFixedPoint);
    }
    TraceTriple t(1, 5, 5);
    try {
        axes_for_vertex(realize(t), root_vertex(t));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonLoxodromicPrimitive);
    }
}

TEST(Axes, RootTripleInGeneralPosition) {
    RepresentationPair p = realize({3, 3, 3});
    AxesTriple a = axes_for_vertex(p, root_vertex({3, 3, 3}));
    EXPECT_NO_THROW(check_general_position(a.axes));
}

TEST(Doubling, Arithmetic) {
    RepresentationPair p = realize({3, 3, 3});
    AxesTriple ax = axes_for_vertex(p, root_vertex({3, 3, 3}));
    SteinerTree tri;
    tri.kind = SteinerKind::FermatTripod;
    tri.feet = {H3Point(), H3Point(), H3Point()};
    tri.legs = {0.3, 0.4, 0.5};
    tri.steiner_length = tri.plain_length = 1.2;
    CarrierGraph b = double_steiner(tri, ax);
    EXPECT_EQ(b.combinatorics, Combinatorics::Buckle);
    EXPECT_NEAR(b.total_length, 2.4, 1e-12);
    ASSERT_EQ(b.edge_lengths.size(), 3u);
    EXPECT_NEAR(b.edge_lengths[2], 1.0, 1e-12);

    SteinerTree path;
    path.kind = SteinerKind::AxisPath;
    path.axis_index = 2;
    path.ends = {0, 1};
    path.feet = {H3Point(), H3Point()};
    path.legs = {0.3, 0.4};
    path.bar = 0.2;
    path.steiner_length = 0.8;
    CarrierGraph d = double_steiner(path, ax);
    EXPECT_EQ(d.combinatorics, Combinatorics::Dumbbell);
    ASSERT_EQ(d.edge_lengths.size(), 3u);
    EXPECT_NEAR(d.edge_lengths[0], 0.6, 1e-12);
    EXPECT_NEAR(d.edge_lengths[1], 0.8, 1e-12);
    EXPECT_NEAR(d.edge_lengths[2], 0.2, 1e-12);
    EXPECT_NEAR(d.total_length, 1.6, 1e-12);

    path.bar = 0.0;
    path.degenerate_on_axis = true;
    try {
        double_steiner(path, ax);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateValenceFour);
    }
}

TEST(Doubling, IdentificationsHold) {
    for (const TraceTriple& t : sample_triples()) {
        RepresentationPair p = realize(t);
        AxesTriple ax = axes_for_vertex(p, root_vertex(t));
        for (const SteinerTree& tr : steiner_tree(ax.axes)) {
            if (tr.degenerate_on_axis) continue;
            CarrierGraph g = double_steiner(tr, ax);
            EXPECT_LT(g.identification_residual, 1e-8);
            EXPECT_NEAR(g.total_length, 2.0 * tr.steiner_length, 1e-9);
            for (double l : g.edge_lengths) EXPECT_GT(l, 0.0);
            EXPECT_EQ(g.combinatorics == Combinatorics::Buckle, tr.kind == SteinerKind::FermatTripod);
        }
    }
}

TEST(Critical, ModularTorus) {
    TraceTriple t(3, 3, 3);
    RepresentationPair p = realize(t);
    std::vector<CarrierGraph> crit = find_critical_carriers(p, t);
    ASSERT_FALSE(crit.empty());
    for (const CarrierGraph& g : crit) {
        EXPECT_NEAR(g.total_length, 2.0 * g.source.steiner_length, 1e-9);
        EXPECT_GT(g.sink_margin, 0.0);
        EXPECT_NEAR(g.total_length, crit.front().total_length, 1e-8);
    }
    std::vector<CarrierGraph> mins = minimal_carrier(p, t);
    ASSERT_FALSE(mins.empty());
    EXPECT_LE(mins.size(), crit.size());
    for (const CarrierGraph& g : crit) EXPECT_LE(mins.front().total_length, g.total_length + 1e-12);
}

TEST(Critical, PlanarCrossCheck) {
    // Fuchsian torus: every gamma is orthogonal to the real vertical plane, and the tripod is the
    // Fermat point of the triangle cut out on that plane
    TraceTriple t(3, 3, 3);
    RepresentationPair p = realize(t);
    std::vector<CarrierGraph> mins = minimal_carrier(p, t);
    ASSERT_EQ(mins.size(), 1u);
    TreeVertex v = vertex_at(t, mins.front().vertex_address);
    AxesTriple ax = axes_for_vertex(p, v);
    std::array<H3Point, 3> pts;
    for (int i = 0; i < 3; ++i) {
        ASSERT_TRUE(is_real_plane_orthogonal(ax.axes[i]));
        cd u = ax.axes[i].start.value();
        pts[i] = H3Point(u.real(), 0.0, std::abs(u.imag()));
    }
    FermatResult f = fermat_point_triangle(Triangle(pts[0], pts[1], pts[2]));
    EXPECT_NEAR(mins.front().total_length, 2.0 * f.value, 1e-7);
    EXPECT_EQ(classify_triangle(Triangle(pts[0], pts[1], pts[2])).shape, TriangleShape::Acute2pi3);
}

TEST(Critical, OrthogonalAxesGiveTwoMinimal) {
    // x = y = 2 sqrt 2, z = 4 is a punctured torus (mu = 0) with z = xy/2: the axes of X and Y are
    // orthogonal and the root ties with its Z neighbour
    double s = std::sqrt(8.0);
    TraceTriple t(s, s, 4);
    EXPECT_LT(std::abs(t.mu()), 1e-12);
    RepresentationPair p = realize(t);
    std::vector<CarrierGraph> mins = minimal_carrier(p, t);
    ASSERT_EQ(mins.size(), 2u);
    EXPECT_EQ(mins[0].vertex_address, "");
    EXPECT_EQ(mins[1].vertex_address, "C");
    EXPECT_NEAR(mins[0].total_length, mins[1].total_length, 1e-9);
    EXPECT_TRUE(mins[0].margin_tied);
}

TEST(Critical, NotAccepted) {
    TraceTriple t(1, 5, 5);
    try {
        find_critical_carriers(realize(t), t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotBqAccepted);
    }
    RepresentationPair r = reducible_pair();
    try {
        minimal_carrier(r, traces_of(r));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotBqAccepted);
    }
}

TEST(Critical, RepresentationMustMatch) {
    EXPECT_THROW(find_critical_carriers(realize({3, 3, 3}), TraceTriple(3, 3, 4)), Error);
}

TEST(Critical, Equivariance) {
    std::mt19937_64 rng(21);
    for (TraceTriple t : {TraceTriple(3, 3, 3), TraceTriple(cd(2.5, 1), 3, cd(2.8, -0.5))}) {
        RepresentationPair p = realize(t);
        std::vector<CarrierGraph> base = minimal_carrier(p, t);
        for (int k = 0; k < 20; ++k) {
            std::vector<CarrierGraph> c = minimal_carrier(conjugate(p, rand_isometry(rng)), t);
            ASSERT_EQ(c.size(), base.size());
            for (size_t i = 0; i < c.size(); ++i) {
                EXPECT_NEAR(c[i].total_length, base[i].total_length, 1e-8);
                for (size_t e = 0; e < c[i].edge_lengths.size(); ++e)
                    EXPECT_NEAR(c[i].edge_lengths[e], base[i].edge_lengths[e], 1e-8);
            }
        }
    }
}

TEST(Critical, SinkAwayFromRootAndTies) {
    // (3, 4, 30): root and its Z neighbour share an axis path
    TraceTriple t(3, 4, 30);
    RepresentationPair p = realize(t);
    std::vector<CarrierGraph> mins = minimal_carrier(p, t);
    ASSERT_FALSE(mins.empty());
    for (const CarrierGraph& g : mins) {
        EXPECT_EQ(g.combinatorics, Combinatorics::Dumbbell);
        EXPECT_GE(g.sink_margin, -1e-9);
    }
}
