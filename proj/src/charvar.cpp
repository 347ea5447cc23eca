#include "hcg/charvar.hpp"

#include <algorithm>
#include <cmath>

namespace hcg {

const char* to_string(Slot s) {
    switch (s) {
        case Slot::X: return "X";
        case Slot::Y: return "Y";
        case Slot::Z: return "Z";
    }
    return "?";
}

cd mu_of(const TraceTriple& t) { return t.x * t.x + t.y * t.y + t.z * t.z - t.x * t.y * t.z; }

cd TraceTriple::mu() const { return mu_of(*this); }

bool is_reducible(const TraceTriple& t, const Tol& tol) {
    double scale = std::max({1.0, std::norm(t.x), std::norm(t.y), std::norm(t.z), std::abs(t.x * t.y * t.z)});
    return std::abs(mu_of(t) - 4.0) <= tol.eps * scale;
}

TraceTriple neighbor_trace(const TraceTriple& t, Slot s) {
    TraceTriple r = t;
    switch (s) {
        case Slot::X: r.x = t.y * t.z - t.x; break;
        case Slot::Y: r.y = t.x * t.z - t.y; break;
        case Slot::Z: r.z = t.x * t.y - t.z; break;
    }
    return r;
}

RepresentationPair realize(const TraceTriple& t, const Tol& tol) {
    if (!std::isfinite(t.x.real()) || !std::isfinite(t.x.imag()) || !std::isfinite(t.y.real()) ||
        !std::isfinite(t.y.imag()) || !std::isfinite(t.z.real()) || !std::isfinite(t.z.imag()))
        throw Error(ErrorKind::InvalidInput, "non-finite trace");
    if (is_reducible(t, tol)) throw Error(ErrorKind::ReducibleTriple, "mu = 4");
    // zeta^2 - z zeta + 1 = 0; the roots are reciprocal so one has modulus >= 1
    cd disc = std::sqrt(t.z * t.z - 4.0);
    cd a = 0.5 * (t.z + disc), b = 0.5 * (t.z - disc);
    auto better = [](cd p, cd q) {
        double dp = std::abs(p), dq = std::abs(q);
        if (std::abs(dp - dq) > 1e-12 * std::max(1.0, dp)) return dp > dq;
        if (std::abs(p.real() - q.real()) > 1e-12) return p.real() > q.real();
        return p.imag() >= q.imag();
    };
    cd zeta = better(a, b) ? a : b;
    Mat2 xi, eta;
    xi << t.x, -1.0, 1.0, 0.0;
    eta << 0.0, zeta, -1.0 / zeta, t.y;
    return {Isometry(xi), Isometry::normalized(eta)};
}

TraceTriple traces_of(const RepresentationPair& p) {
    return {p.xi.trace(), p.eta.trace(), (p.xi * p.eta).trace()};
}

RepresentationPair conjugate(const RepresentationPair& p, const Isometry& g) {
    Isometry gi = g.inverse();
    return {g * p.xi * gi, g * p.eta * gi};
}

bool is_word(std::string_view w) {
    return std::all_of(w.begin(), w.end(), [](char c) { return c == 'X' || c == 'x' || c == 'Y' || c == 'y'; });
}

static char flip(char c) { return c == 'X' ? 'x' : c == 'x' ? 'X' : c == 'Y' ? 'y' : 'Y'; }

std::string reduce_word(std::string_view w) {
    if (!is_word(w)) throw Error(ErrorKind::InvalidInput, "word letters must be X, x, Y, y");
    std::string out;
    for (char c : w) {
        if (!out.empty() && out.back() == flip(c))
            out.pop_back();
        else
            out.push_back(c);
    }
    return out;
}

std::string inverse_word(std::string_view w) {
    std::string out(w.rbegin(), w.rend());
    for (char& c : out) c = flip(c);
    return reduce_word(out);
}

std::string concat(std::string_view a, std::string_view b) {
    std::string s(a);
    s += b;
    return reduce_word(s);
}

Isometry word_image(const RepresentationPair& p, std::string_view word) {
    std::string w = reduce_word(word);
    Isometry xi_inv = p.xi.inverse(), eta_inv = p.eta.inverse();
    Isometry r;
    for (char c : w) {
        switch (c) {
            case 'X': r = r * p.xi; break;
            case 'x': r = r * xi_inv; break;
            case 'Y': r = r * p.eta; break;
            default: r = r * eta_inv; break;
        }
    }
    return r;
}

}  // namespace hcg
