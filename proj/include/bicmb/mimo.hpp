#pragma once

// Beamformed MIMO channel model: i.i.d. Rayleigh channel draws, singular
// value decomposition turning the channel into parallel scalar
// subchannels, and Gray-mapped constellations with max-log per-bit
// metrics for the scalar channel y = sigma * x + n.

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "bicmb/bits.hpp"
#include "bicmb/convcode.hpp"  // BitMetric

namespace bicmb {

using cplx = std::complex<double>;

struct CMatrix {
    int rows = 0, cols = 0;
    std::vector<cplx> a;  // row-major

    CMatrix() = default;
    CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const cplx& operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static CMatrix identity(int n);
};

CMatrix matmul(const CMatrix& x, const CMatrix& y);
CMatrix hermitian(const CMatrix& x);
double frobenius_norm(const CMatrix& x);

// Nr x Nt, entries i.i.d. CN(0,1); deterministic for a given generator state.
CMatrix sample_channel(int nt, int nr, std::mt19937_64& rng);

struct SvdResult {
    CMatrix u;                  // Nr x Nr unitary
    std::vector<double> sigma;  // min(Nr,Nt) singular values, descending
    CMatrix v;                  // Nt x Nt unitary
};

// 2x2 uses the closed-form eigendecomposition of H^H H; other sizes use
// one-sided Jacobi sweeps (tolerance 1e-12, at most 100 sweeps;
// non-convergence raises std::runtime_error).
SvdResult svd_decompose(const CMatrix& h);

// max |U Sigma V^H - H| residual, for checks.
double svd_reconstruction_error(const CMatrix& h, const SvdResult& s);
double unitarity_error(const CMatrix& u);

struct Constellation {
    std::string name;
    int bits_per_symbol = 1;   // B
    std::vector<cplx> points;  // index = label bits, most significant first
};

// bpsk | qpsk | qam16. Unit average energy, Gray labeling:
// BPSK 0 -> +1, 1 -> -1; QPSK first bit keys I, second keys Q, 00 ->
// (+1+j)/sqrt(2); 16-QAM first two bits key I, last two key Q, per-axis
// Gray 00,01,11,10 -> -3,-1,+1,+3 over sqrt(10).
Constellation make_constellation(const std::string& name);

std::vector<cplx> modulate(const Bits& bits, const Constellation& c);
Bits hard_demap(const std::vector<cplx>& symbols, const Constellation& c);

// metrics[b][v] = min over points x with label bit b = v of |y - sigma*x|^2.
std::vector<BitMetric> bit_metrics(cplx y, double sigma, const Constellation& c);

}  // namespace bicmb
