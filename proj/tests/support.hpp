#pragma once

#include "hcg/hyp3.hpp"

#include <cmath>
#include <random>

namespace testing_support {

using hcg::cd;

inline cd rand_complex(std::mt19937_64& rng, double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

inline hcg::Isometry rand_isometry(std::mt19937_64& rng, double scale = 1.5) {
    hcg::Mat2 m;
    m << rand_complex(rng, scale), rand_complex(rng, scale), rand_complex(rng, scale), rand_complex(rng, scale);
    while (std::abs(m.determinant()) < 0.1)
        m(0, 0) += 1.0;
    return hcg::Isometry::normalized(m);
}

inline hcg::H3Point rand_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.5, 1.5), h(0.2, 2.0);
    return {u(rng), u(rng), h(rng)};
}

// Endpoints drawn from a disc; resampled until well separated.
inline hcg::Geodesic rand_geodesic(std::mt19937_64& rng, double scale = 2.0) {
    for (;;) {
        cd a = rand_complex(rng, scale), b = rand_complex(rng, scale);
        if (std::abs(a - b) > 0.2) return {a, b};
    }
}

// Three pairwise-disjoint geodesics: endpoints in separated discs keep them apart.
// Each geodesic's endpoints are at least 0.1 apart so the hexagon stays well conditioned.
inline std::array<hcg::Geodesic, 3> rand_disjoint_triple(std::mt19937_64& rng) {
    for (;;) {
        std::array<hcg::Geodesic, 3> g;
        std::uniform_real_distribution<double> ang(0, hcg::kTwoPi), rad(0.15, 0.6);
        for (int i = 0; i < 3; ++i) {
            cd centre = std::polar(2.0, ang(rng));
            double r = rad(rng);
            cd u = centre + std::polar(r, ang(rng)), v = centre + std::polar(r, ang(rng));
            while (std::abs(u - v) < 0.1) v = centre + std::polar(r, ang(rng));
            g[i] = hcg::Geodesic(u, v);
        }
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i)
            for (int j = i + 1; j < 3 && ok; ++j) {
                try {
                    hcg::common_perpendicular(g[i], g[j]);
                } catch (const hcg::Error&) {
                    ok = false;
                }
            }
        if (ok) return g;
    }
}

inline double max_abs(const hcg::Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing_support
