// Periodic 2D grid and Fourier pseudo-spectral differential operators.
#ifndef THPF_GRID_HPP
#define THPF_GRID_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

namespace thpf {

struct grid_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct positivity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct iteration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform periodic rectangular lattice with spectral metadata.
/// kx/ky are the derivative wavenumbers: standard signed FFT ordering with
/// the Nyquist mode zeroed, so that odd-order derivatives of real fields
/// stay real and div(grad f) == laplacian(f) holds exactly in spectral space.
struct Grid {
    int nx = 0, ny = 0;
    double lx = 0, ly = 0;
    double dx = 0, dy = 0;
    std::vector<double> kx, ky;

    Grid() = default;
    Grid(int nx_, int ny_, double lx_, double ly_)
        : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
        if (nx < 4 || ny < 4 || nx % 2 || ny % 2)
            throw grid_error("Grid: nx, ny must be even and >= 4");
        if (!(lx > 0) || !(ly > 0))
            throw grid_error("Grid: domain lengths must be positive");
        dx = lx / nx;
        dy = ly / ny;
        kx.resize(nx);
        ky.resize(ny);
        for (int i = 0; i < nx; ++i) {
            int f = (i <= nx / 2) ? i : i - nx;
            kx[i] = (i == nx / 2) ? 0.0 : 2.0 * M_PI / lx * f;
        }
        for (int j = 0; j < ny; ++j) {
            int f = (j <= ny / 2) ? j : j - ny;
            ky[j] = (j == ny / 2) ? 0.0 : 2.0 * M_PI / ly * f;
        }
    }

    int size() const { return nx * ny; }
    int spec_size() const { return nx * (ny / 2 + 1); }
    double cell_area() const { return dx * dy; }
    double area() const { return lx * ly; }
    int idx(int i, int j) const { return i * ny + j; }
    double x(int i) const { return i * dx; }
    double y(int j) const { return j * dy; }

    bool same(const Grid& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

/// Real scalar field, row-major (x outer, y inner), length nx*ny.
struct ScalarField {
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : v(g.size(), fill) {}

    double& operator[](int k) { return v[k]; }
    double operator[](int k) const { return v[k]; }
    int size() const { return static_cast<int>(v.size()); }
};

struct VectorField {
    ScalarField x, y;

    VectorField() = default;
    explicit VectorField(const Grid& g, double fill = 0.0) : x(g, fill), y(g, fill) {}
};

/// Symmetric 2x2 tensor field (xy == yx).
struct TensorField {
    ScalarField xx, xy, yy;

    TensorField() = default;
    explicit TensorField(const Grid& g) : xx(g), xy(g), yy(g) {}
};

using Spectrum = std::vector<std::complex<double>>;

inline void check_field(const ScalarField& f, const Grid& g, const char* who) {
    if (f.size() != g.size())
        throw grid_error(std::string(who) + ": field size does not match grid");
}

inline void check_field(const VectorField& v, const Grid& g, const char* who) {
    check_field(v.x, g, who);
    check_field(v.y, g, who);
}

inline bool has_nan(const ScalarField& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return true;
    return false;
}

inline bool has_nan(const VectorField& v) { return has_nan(v.x) || has_nan(v.y); }

namespace detail {

/// FFTW r2c/c2r plan pair for one grid size. Cached thread-locally so the
/// public operators stay pure functions of their arguments.
class Fft {
  public:
    Fft(int nx, int ny) : nx_(nx), ny_(ny), nc_(nx * (ny / 2 + 1)) {
        real_ = fftw_alloc_real(static_cast<size_t>(nx) * ny);
        cplx_ = fftw_alloc_complex(nc_);
        fwd_ = fftw_plan_dft_r2c_2d(nx, ny, real_, cplx_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_2d(nx, ny, cplx_, real_, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw std::runtime_error("Fft: plan creation failed");
    }
    ~Fft() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(cplx_);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(const std::vector<double>& in, Spectrum& out) {
        std::copy(in.begin(), in.end(), real_);
        fftw_execute(fwd_);
        out.resize(nc_);
        for (int k = 0; k < nc_; ++k) out[k] = {cplx_[k][0], cplx_[k][1]};
    }

    void inverse(const Spectrum& in, std::vector<double>& out) {
        for (int k = 0; k < nc_; ++k) {
            cplx_[k][0] = in[k].real();
            cplx_[k][1] = in[k].imag();
        }
        fftw_execute(bwd_);
        const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
        out.resize(static_cast<size_t>(nx_) * ny_);
        for (int k = 0; k < nx_ * ny_; ++k) out[k] = real_[k] * scale;
    }

  private:
    int nx_, ny_, nc_;
    double* real_;
    fftw_complex* cplx_;
    fftw_plan fwd_, bwd_;
};

inline Fft& fft_for(const Grid& g) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<Fft>> cache;
    auto key = std::make_pair(g.nx, g.ny);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<Fft>(g.nx, g.ny)).first;
    return *it->second;
}

inline int spec_idx(const Grid& g, int i, int j) { return i * (g.ny / 2 + 1) + j; }

}  // namespace detail

inline Spectrum forward(const ScalarField& f, const Grid& g) {
    check_field(f, g, "forward");
    Spectrum out;
    detail::fft_for(g).forward(f.v, out);
    return out;
}

inline ScalarField inverse(const Spectrum& s, const Grid& g) {
    ScalarField out;
    detail::fft_for(g).inverse(s, out.v);
    return out;
}

/// Apply op(i, j, kx, ky, value) to every retained r2c mode in place.
template <class Op>
inline void for_each_mode(Spectrum& s, const Grid& g, Op op) {
    const int nj = g.ny / 2 + 1;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < nj; ++j)
            op(i, j, g.kx[i], g.ky[j], s[i * nj + j]);
}

inline VectorField gradient(const ScalarField& f, const Grid& g) {
    check_field(f, g, "gradient");
    Spectrum fh = forward(f, g);
    Spectrum gx = fh, gy = fh;
    const std::complex<double> I(0, 1);
    for_each_mode(gx, g, [&](int, int, double kx, double, std::complex<double>& c) { c *= I * kx; });
    for_each_mode(gy, g, [&](int, int, double, double ky, std::complex<double>& c) { c *= I * ky; });
    VectorField out;
    out.x = inverse(gx, g);
    out.y = inverse(gy, g);
    return out;
}

inline ScalarField divergence(const VectorField& v, const Grid& g) {
    check_field(v, g, "divergence");
    Spectrum ax = forward(v.x, g);
    Spectrum ay = forward(v.y, g);
    const std::complex<double> I(0, 1);
    const int nj = g.ny / 2 + 1;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < nj; ++j) {
            int k = i * nj + j;
            ax[k] = I * (g.kx[i] * ax[k] + g.ky[j] * ay[k]);
        }
    return inverse(ax, g);
}

inline ScalarField laplacian(const ScalarField& f, const Grid& g) {
    check_field(f, g, "laplacian");
    Spectrum fh = forward(f, g);
    for_each_mode(fh, g, [](int, int, double kx, double ky, std::complex<double>& c) {
        c *= -(kx * kx + ky * ky);
    });
    return inverse(fh, g);
}

/// Second derivative d2f/(da db), a,b in {0,1}.
inline ScalarField second_derivative(const ScalarField& f, int a, int b, const Grid& g) {
    check_field(f, g, "second_derivative");
    Spectrum fh = forward(f, g);
    for_each_mode(fh, g, [&](int, int, double kx, double ky, std::complex<double>& c) {
        double ka = a == 0 ? kx : ky;
        double kb = b == 0 ? kx : ky;
        c *= -ka * kb;
    });
    return inverse(fh, g);
}

/// 2/3-rule truncation; applied to every quadratic/cubic product.
inline void dealias_spectrum(Spectrum& s, const Grid& g) {
    const int cx = g.nx / 3, cy = g.ny / 3;
    const int nj = g.ny / 2 + 1;
    for (int i = 0; i < g.nx; ++i) {
        int fx = (i <= g.nx / 2) ? i : i - g.nx;
        for (int j = 0; j < nj; ++j)
            if (std::abs(fx) > cx || j > cy) s[i * nj + j] = 0.0;
    }
}

inline ScalarField dealias(const ScalarField& f, const Grid& g) {
    check_field(f, g, "dealias");
    Spectrum fh = forward(f, g);
    dealias_spectrum(fh, g);
    return inverse(fh, g);
}

/// Leray projection onto divergence-free fields; preserves the mean.
/// If potential != nullptr it receives the scalar psi with v = P(v) + grad(psi).
inline VectorField leray_project(const VectorField& v, const Grid& g,
                                 ScalarField* potential = nullptr) {
    check_field(v, g, "leray_project");
    Spectrum ax = forward(v.x, g);
    Spectrum ay = forward(v.y, g);
    Spectrum psih;
    if (potential) psih.assign(ax.size(), 0.0);
    const int nj = g.ny / 2 + 1;
    const std::complex<double> I(0, 1);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < nj; ++j) {
            double kx = g.kx[i], ky = g.ky[j];
            double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue;
            int k = i * nj + j;
            std::complex<double> kv = (kx * ax[k] + ky * ay[k]) / k2;
            ax[k] -= kx * kv;
            ay[k] -= ky * kv;
            if (potential) psih[k] = -I * kv;  // psi solves lap psi = div v
        }
    VectorField out;
    out.x = inverse(ax, g);
    out.y = inverse(ay, g);
    if (potential) *potential = inverse(psih, g);
    return out;
}

// --- quadrature and norms (rectangle rule == Fourier mean on periodic grids) ---

inline double integrate(const ScalarField& f, const Grid& g) {
    check_field(f, g, "integrate");
    return g.cell_area() * std::accumulate(f.v.begin(), f.v.end(), 0.0);
}

inline double mean(const ScalarField& f, const Grid& g) {
    return integrate(f, g) / g.area();
}

inline double l2_norm(const ScalarField& f, const Grid& g) {
    double s = 0;
    for (double x : f.v) s += x * x;
    return std::sqrt(g.cell_area() * s);
}

inline double l2_norm(const VectorField& v, const Grid& g) {
    double s = 0;
    for (int k = 0; k < v.x.size(); ++k) s += v.x[k] * v.x[k] + v.y[k] * v.y[k];
    return std::sqrt(g.cell_area() * s);
}

inline double linf_norm(const ScalarField& f) {
    double m = 0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

inline double min_value(const ScalarField& f) {
    return *std::min_element(f.v.begin(), f.v.end());
}

inline double max_value(const ScalarField& f) {
    return *std::max_element(f.v.begin(), f.v.end());
}

inline double max_speed(const VectorField& v) {
    double m = 0;
    for (int k = 0; k < v.x.size(); ++k)
        m = std::max(m, std::hypot(v.x[k], v.y[k]));
    return m;
}

}  // namespace thpf

#endif
