#include "bicmb/mimo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bicmb/rng.hpp"

namespace bicmb {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix matmul(const CMatrix& x, const CMatrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: dimension mismatch");
    CMatrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const cplx xv = x(i, k);
            for (int j = 0; j < y.cols; ++j) r(i, j) += xv * y(k, j);
        }
    return r;
}

CMatrix hermitian(const CMatrix& x) {
    CMatrix r(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r(j, i) = std::conj(x(i, j));
    return r;
}

double frobenius_norm(const CMatrix& x) {
    double s = 0.0;
    for (const cplx& v : x.a) s += std::norm(v);
    return std::sqrt(s);
}

CMatrix sample_channel(int nt, int nr, std::mt19937_64& rng) {
    if (nt < 1 || nr < 1) throw std::invalid_argument("sample_channel: dimensions must be >= 1");
    CMatrix h(nr, nt);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) h(i, j) = complex_gaussian(rng);
    return h;
}

namespace {

// Orthonormal completion of the columns [0, have) of u.
void complete_basis(CMatrix& u, int have) {
    const int n = u.rows;
    for (int col = have; col < n; ++col) {
        for (int cand = 0; cand < n; ++cand) {
            std::vector<cplx> v(n, 0.0);
            v[cand] = 1.0;
            for (int j = 0; j < col; ++j) {
                cplx dot = 0.0;
                for (int i = 0; i < n; ++i) dot += std::conj(u(i, j)) * v[i];
                for (int i = 0; i < n; ++i) v[i] -= dot * u(i, j);
            }
            double norm = 0.0;
            for (const cplx& x : v) norm += std::norm(x);
            norm = std::sqrt(norm);
            if (norm > 1e-6) {
                for (int i = 0; i < n; ++i) u(i, col) = v[i] / norm;
                break;
            }
        }
    }
}

SvdResult svd_2x2(const CMatrix& h) {
    // Eigendecomposition of A = H^H H = [[a, b], [conj(b), d]].
    const cplx b = std::conj(h(0, 0)) * h(0, 1) + std::conj(h(1, 0)) * h(1, 1);
    const double a = std::norm(h(0, 0)) + std::norm(h(1, 0));
    const double d = std::norm(h(0, 1)) + std::norm(h(1, 1));
    const double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) + 4.0 * std::norm(b)));
    const double lam1 = 0.5 * (a + d + disc);
    const double lam2 = std::max(0.0, 0.5 * (a + d - disc));

    SvdResult r;
    r.sigma = {std::sqrt(lam1), std::sqrt(lam2)};
    r.v = CMatrix::identity(2);

    // Leading eigenvector of A: (lam1-d, conj(b)) and (b, lam1-a) are both
    // valid; take the larger-norm one.
    if (std::abs(b) > 0.0) {
        cplx v0, v1;
        if (a >= d) {
            v0 = lam1 - d;
            v1 = std::conj(b);
        } else {
            v0 = b;
            v1 = lam1 - a;
        }
        const double n = std::sqrt(std::norm(v0) + std::norm(v1));
        v0 /= n;
        v1 /= n;
        r.v(0, 0) = v0;
        r.v(1, 0) = v1;
        r.v(0, 1) = -std::conj(v1);
        r.v(1, 1) = std::conj(v0);
    } else if (a < d) {
        // Diagonal A with swapped order.
        r.v(0, 0) = 0.0;
        r.v(1, 0) = 1.0;
        r.v(0, 1) = 1.0;
        r.v(1, 1) = 0.0;
    }

    r.u = CMatrix(2, 2);
    int have = 0;
    for (int j = 0; j < 2; ++j) {
        if (r.sigma[j] > 0.0) {
            for (int i = 0; i < 2; ++i)
                r.u(i, j) = (h(i, 0) * r.v(0, j) + h(i, 1) * r.v(1, j)) / r.sigma[j];
            ++have;
        }
    }
    if (have < 2) {
        if (have == 1 && r.sigma[1] == 0.0) {
            complete_basis(r.u, 1);
        } else {
            r.u = CMatrix::identity(2);
        }
    }
    return r;
}

SvdResult svd_jacobi(const CMatrix& h) {
    constexpr double tol = 1e-12;
    constexpr int max_sweeps = 100;

    const bool wide = h.rows < h.cols;  // work on H^H so rows >= cols
    CMatrix g = wide ? hermitian(h) : h;
    const int m = g.rows, n = g.cols;
    CMatrix v = CMatrix::identity(n);

    for (int sweep = 0;; ++sweep) {
        if (sweep >= max_sweeps)
            throw std::runtime_error("svd: one-sided Jacobi did not converge in 100 sweeps");
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0;
                cplx gamma = 0.0;
                for (int i = 0; i < m; ++i) {
                    alpha += std::norm(g(i, p));
                    beta += std::norm(g(i, q));
                    gamma += std::conj(g(i, p)) * g(i, q);
                }
                const double denom = std::sqrt(alpha * beta);
                if (denom == 0.0 || std::abs(gamma) <= tol * denom) continue;
                off = std::max(off, std::abs(gamma) / denom);

                const double phi = std::arg(gamma);
                const cplx eip = std::polar(1.0, phi);
                const double zeta = (beta - alpha) / (2.0 * std::abs(gamma));
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;

                for (int i = 0; i < m; ++i) {
                    const cplx gp = g(i, p), gq = g(i, q);
                    g(i, p) = cs * gp - sn * std::conj(eip) * gq;
                    g(i, q) = sn * eip * gp + cs * gq;
                }
                for (int i = 0; i < n; ++i) {
                    const cplx vp = v(i, p), vq = v(i, q);
                    v(i, p) = cs * vp - sn * std::conj(eip) * vq;
                    v(i, q) = sn * eip * vp + cs * vq;
                }
            }
        }
        if (off <= tol) break;
    }

    std::vector<double> sig(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += std::norm(g(i, j));
        sig[j] = std::sqrt(s);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return sig[x] > sig[y]; });

    CMatrix u(m, m), vs(n, n);
    std::vector<double> sigma(std::min(m, n));
    int have = 0;
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        for (int i = 0; i < n; ++i) vs(i, j) = v(i, src);
        if (j < std::min(m, n)) sigma[j] = sig[src];
        if (j < m && sig[src] > 0.0) {
            for (int i = 0; i < m; ++i) u(i, j) = g(i, src) / sig[src];
            ++have;
        }
    }
    complete_basis(u, have);

    SvdResult r;
    if (wide) {  // H^H = U' S V'^H  =>  H = V' S U'^H
        r.u = vs;
        r.v = u;
        r.sigma = sigma;
    } else {
        r.u = u;
        r.v = vs;
        r.sigma = sigma;
    }
    return r;
}

}  // namespace

SvdResult svd_decompose(const CMatrix& h) {
    for (const cplx& x : h.a)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw std::invalid_argument("svd: non-finite entry");
    if (h.rows == 2 && h.cols == 2) return svd_2x2(h);
    return svd_jacobi(h);
}

double svd_reconstruction_error(const CMatrix& h, const SvdResult& s) {
    double err = 0.0;
    for (int i = 0; i < h.rows; ++i)
        for (int j = 0; j < h.cols; ++j) {
            cplx r = 0.0;
            for (int k = 0; k < static_cast<int>(s.sigma.size()); ++k)
                r += s.u(i, k) * s.sigma[k] * std::conj(s.v(j, k));
            err += std::norm(r - h(i, j));
        }
    return std::sqrt(err);
}

double unitarity_error(const CMatrix& u) {
    CMatrix g = matmul(hermitian(u), u);
    double err = 0.0;
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) err += std::norm(g(i, j) - (i == j ? 1.0 : 0.0));
    return std::sqrt(err);
}

Constellation make_constellation(const std::string& name) {
    Constellation c;
    c.name = name;
    if (name == "bpsk") {
        c.bits_per_symbol = 1;
        c.points = {1.0, -1.0};
    } else if (name == "qpsk") {
        c.bits_per_symbol = 2;
        c.points.resize(4);
        for (int label = 0; label < 4; ++label) {
            const double i = (label & 2) ? -1.0 : 1.0;  // first bit
            const double q = (label & 1) ? -1.0 : 1.0;  // second bit
            c.points[label] = cplx(i, q) * M_SQRT1_2;
        }
    } else if (name == "qam16") {
        c.bits_per_symbol = 4;
        c.points.resize(16);
        // Per-axis Gray: 00,01,11,10 -> -3,-1,+1,+3.
        auto level = [](int two_bits) {
            switch (two_bits) {
                case 0: return -3.0;
                case 1: return -1.0;
                case 3: return 1.0;
                default: return 3.0;
            }
        };
        const double scale = 1.0 / std::sqrt(10.0);
        for (int label = 0; label < 16; ++label)
            c.points[label] = cplx(level(label >> 2), level(label & 3)) * scale;
    } else {
        throw std::invalid_argument("constellation: unknown name '" + name +
                                    "' (expected bpsk, qpsk or qam16)");
    }
    return c;
}

std::vector<cplx> modulate(const Bits& bits, const Constellation& c) {
    const int b = c.bits_per_symbol;
    if (bits.size() % static_cast<std::size_t>(b) != 0)
        throw std::invalid_argument("modulate: bit count not divisible by B");
    std::vector<cplx> out;
    out.reserve(bits.size() / b);
    for (std::size_t i = 0; i < bits.size(); i += b) {
        int label = 0;
        for (int j = 0; j < b; ++j) label = (label << 1) | bits[i + j];
        out.push_back(c.points[label]);
    }
    return out;
}

Bits hard_demap(const std::vector<cplx>& symbols, const Constellation& c) {
    Bits out;
    out.reserve(symbols.size() * c.bits_per_symbol);
    for (const cplx& y : symbols) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < c.points.size(); ++m) {
            const double d = std::norm(y - c.points[m]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(m);
            }
        }
        for (int j = c.bits_per_symbol - 1; j >= 0; --j)
            out.push_back(static_cast<std::uint8_t>((best >> j) & 1));
    }
    return out;
}

std::vector<BitMetric> bit_metrics(cplx y, double sigma, const Constellation& c) {
    if (sigma < 0.0) throw std::invalid_argument("bit_metrics: sigma must be >= 0");
    const int b = c.bits_per_symbol;
    std::vector<BitMetric> metrics(
        b, BitMetric{std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()});
    for (std::size_t m = 0; m < c.points.size(); ++m) {
        const double d = std::norm(y - sigma * c.points[m]);
        for (int j = 0; j < b; ++j) {
            const int v = (static_cast<int>(m) >> (b - 1 - j)) & 1;  // MSB first
            metrics[j][v] = std::min(metrics[j][v], d);
        }
    }
    return metrics;
}

}  // namespace bicmb
