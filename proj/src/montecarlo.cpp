#include "sblab/montecarlo.hpp"

#include "sblab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace sblab::mc {

namespace {

double log_sinc(double y) {
    // log(sin(y)/y) on (0, pi); y/pi < 1 keeps sin positive
    return std::log(std::sin(y) / y);
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

double stable_increment(double rho, double dt, rng::Philox& g) {
    if (!(dt > 0.0)) throw std::invalid_argument("stable_increment: dt > 0");
    if (!(rho > 0.0) || rho > 1.0)
        throw std::invalid_argument("stable_increment: rho in (0,1]");
    if (rho == 1.0) return dt;  // phi(lambda) = lambda, pure drift
    double x = kPi * g.uniform();
    double w = g.exponential();
    double r1 = 1.0 - rho;
    double log_a = r1 * (std::log(r1) + log_sinc(r1 * x)) +
                   rho * (std::log(rho) + log_sinc(rho * x)) - log_sinc(x);
    double log_s = (log_a - r1 * std::log(w)) / rho + std::log(dt) / rho;
    return std::exp(log_s);
}

SubordinatorStepper::SubordinatorStepper(const BernsteinFunction& f, Mode mode,
                                         double eps)
    : f_(&f), mode_(mode), eps_(eps) {
    if (mode_ == Mode::Exact) {
        if (f.family() == "stable-log")
            throw missing_sampler("no exact sampler for stable-log");
        if (f.family() == "stable-sum" && f.kappa() == 0.0)
            throw missing_sampler("stable-sum with kappa = 0 has a killing term");
        return;
    }
    if (!(eps > 0.0))
        throw std::invalid_argument("SubordinatorStepper: eps > 0");
    if (!f.has_chi())
        throw missing_sampler("no registered Levy density chi for family " +
                              f.family());
    drift_ = num::integrate_from_zero([&f](double t) { return t * f.chi(t); },
                                      eps);
    // Tail table: log-spaced nodes, cumulative mass from eps, extended
    // decade by decade until the tail is negligible.
    const int per_decade = 80;
    log_t_.push_back(std::log(eps));
    cum_.push_back(0.0);
    double total = 0.0;
    for (int dec = 0; dec < 60; ++dec) {
        double decade_mass = 0.0;
        for (int j = 1; j <= per_decade; ++j) {
            double lo = eps * std::pow(10.0, dec + (j - 1) / double(per_decade));
            double hi = eps * std::pow(10.0, dec + j / double(per_decade));
            double mass = num::integrate(
                [&f](double t) { return f.chi(t); }, lo, hi, 1e-10);
            decade_mass += mass;
            total += mass;
            log_t_.push_back(std::log(hi));
            cum_.push_back(total);
        }
        if (dec > 2 && decade_mass < 1e-13 * total) break;
    }
    rate_ = total;
}

double SubordinatorStepper::table_jump(double u) const {
    double target = u * rate_;
    auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    if (it == cum_.begin()) ++it;
    if (it == cum_.end()) --it;
    std::size_t j = static_cast<std::size_t>(it - cum_.begin());
    double seg = cum_[j] - cum_[j - 1];
    if (!(seg > 0.0)) return std::exp(log_t_[j]);
    double frac = (target - cum_[j - 1]) / seg;
    return std::exp(log_t_[j - 1] + frac * (log_t_[j] - log_t_[j - 1]));
}

double SubordinatorStepper::tilted_stable(double rho, double big_m, double dt,
                                          rng::Philox& g) const {
    // Exponential tilting by rejection: accept an alpha/2-stable draw S
    // with probability exp(-M S); acceptance rate exp(-dt m), so dt is
    // split into pieces with piece * m <= 1.
    double m_eff = std::pow(big_m, rho);
    std::uint64_t pieces =
        static_cast<std::uint64_t>(std::ceil(dt * m_eff));
    if (pieces < 1) pieces = 1;
    if (pieces > 1000000)
        throw std::runtime_error("tilted_stable: dt * m too large");
    double piece = dt / static_cast<double>(pieces);
    double total = 0.0;
    for (std::uint64_t i = 0; i < pieces; ++i) {
        for (;;) {
            double s = stable_increment(rho, piece, g);
            if (g.uniform() < std::exp(-big_m * s)) {
                total += s;
                break;
            }
        }
    }
    return total;
}

double SubordinatorStepper::exact_increment(double dt, rng::Philox& g) const {
    const auto& fam = f_->family();
    double a = 0.5 * f_->alpha();
    if (fam == "stable") return stable_increment(a, dt, g);
    if (fam == "stable-sum")
        return stable_increment(a, dt, g) +
               stable_increment(0.5 * f_->kappa(), dt, g);
    if (fam == "power-sum") {
        // phi = psi(lambda)^kappa with psi = lambda + lambda^alpha: run the
        // drift-plus-stable psi-subordinator at a kappa-stable clock
        double clock = stable_increment(f_->kappa(), dt, g);
        if (clock == 0.0) return 0.0;
        return clock + stable_increment(f_->alpha(), clock, g);
    }
    double big_m = std::pow(f_->m(), 2.0 / f_->alpha());
    if (fam == "relativistic") return tilted_stable(a, big_m, dt, g);
    if (fam == "geometric") {
        // phi = log(1 + lambda^a): stable subordinator at a Gamma clock
        double clock = g.gamma(dt);
        if (clock == 0.0) return 0.0;
        if (a == 1.0) return clock;
        return stable_increment(a, clock, g);
    }
    if (fam == "relativistic-geometric") {
        double clock = g.gamma(dt);
        if (clock == 0.0) return 0.0;
        return tilted_stable(a, big_m, clock, g);
    }
    throw missing_sampler("no exact sampler for " + fam);
}

double SubordinatorStepper::increment(double dt, rng::Philox& g) const {
    if (!(dt > 0.0))
        throw std::invalid_argument("SubordinatorStepper: dt > 0");
    if (mode_ == Mode::Exact) return exact_increment(dt, g);
    std::uint64_t jumps = g.poisson(rate_ * dt);
    double total = drift_ * dt;
    for (std::uint64_t i = 0; i < jumps; ++i) total += table_jump(g.uniform());
    return total;
}

ExitSample sample_exit(const Domain& D, const Point& x,
                       const SubordinatorStepper& st, const StepControl& ctrl,
                       rng::Philox& g) {
    if (!D.contains(x))
        throw std::invalid_argument("sample_exit: start point not in D");
    const int d = D.dim();
    ExitSample out;
    out.x = x;
    out.min_delta = std::numeric_limits<double>::infinity();
    Point cur = x;
    while (out.steps < ctrl.max_steps) {
        double delta = std::max(D.dist_to_boundary(cur), 1e-12);
        out.min_delta = std::min(out.min_delta, delta);
        double dt = ctrl.c_time / st.phi().phi(1.0 / (delta * delta));
        double s = st.increment(dt, g);
        double scale = std::sqrt(2.0 * s);
        Point next = cur;
        for (int i = 0; i < d; ++i) next[i] += scale * g.normal();
        ++out.steps;
        out.tau += dt;
        if (!D.contains(next)) {
            out.pre_exit = cur;
            out.exit_pos = next;
            return out;
        }
        cur = next;
    }
    out.censored = true;
    out.pre_exit = cur;
    out.exit_pos = cur;
    return out;
}

namespace {

struct BatchStats {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t count = 0;
    bool heavy = false;
};

// Index-ordered mean with batch-means standard error over 32 contiguous
// index batches; entries flagged in `skip` are excluded.
BatchStats batch_reduce(const std::vector<double>& vals,
                        const std::vector<std::uint8_t>& skip) {
    const std::size_t n = vals.size();
    const int kB = 32;
    double bsum[kB] = {0.0};
    std::uint64_t bcnt[kB] = {0};
    for (std::size_t i = 0; i < n; ++i) {
        if (skip[i]) continue;
        int b = static_cast<int>(i * kB / n);
        bsum[b] += vals[i];
        bcnt[b] += 1;
    }
    BatchStats out;
    double total = 0.0;
    for (int b = 0; b < kB; ++b) {
        total += bsum[b];
        out.count += bcnt[b];
    }
    if (out.count == 0) return out;
    out.mean = total / static_cast<double>(out.count);
    int used = 0;
    double ss = 0.0, maxdev = 0.0;
    for (int b = 0; b < kB; ++b) {
        if (bcnt[b] == 0) continue;
        double m = bsum[b] / static_cast<double>(bcnt[b]);
        double dev = m - out.mean;
        ss += dev * dev;
        maxdev = std::max(maxdev, std::fabs(dev));
        ++used;
    }
    if (used > 1) {
        double sd = std::sqrt(ss / (used - 1));
        out.se = sd / std::sqrt(static_cast<double>(used));
        out.heavy = sd > 0.0 && maxdev > 5.0 * sd;
    }
    return out;
}

}  // namespace

HarmonicEstimate estimate_u_f(const Domain& D, const ExteriorFunction& f,
                              const Point& x, std::uint64_t n,
                              const SubordinatorStepper& st,
                              std::uint64_t seed, const StepControl& ctrl,
                              int workers) {
    if (n < 1000)
        throw std::invalid_argument("estimate_u_f: need N >= 1000");
    std::vector<double> vals(n, 0.0);
    std::vector<std::uint8_t> cen(n, 0);
    num::parallel_chunks(n, workers,
                         [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
                             for (std::uint64_t i = b; i < e; ++i) {
                                 rng::Philox g(seed, i);
                                 ExitSample s = sample_exit(D, x, st, ctrl, g);
                                 cen[i] = s.censored ? 1 : 0;
                                 if (!s.censored) vals[i] = f(s.exit_pos);
                             }
                         });
    BatchStats bs = batch_reduce(vals, cen);
    HarmonicEstimate out;
    out.x = x;
    out.value = bs.mean;
    out.se = bs.se;
    out.n = n;
    out.censored = n - bs.count;
    out.seed = seed;
    out.f_id = f.family();
    out.heavy_tail_warning = bs.heavy;
    return out;
}

Point ExitHistogram::centroid(std::size_t b) const {
    std::size_t k = b / static_cast<std::size_t>(n_angular);
    std::size_t j = b % static_cast<std::size_t>(n_angular);
    double rc = radius + 0.5 * (edges[k] + edges[k + 1]);
    Point p = center;
    if (d == 2) {
        double th = -kPi + (j + 0.5) * 2.0 * kPi / n_angular;
        p[0] += rc * std::cos(th);
        p[1] += rc * std::sin(th);
    } else {
        double w = -1.0 + (j + 0.5) * 2.0 / n_angular;
        double sth = std::sqrt(std::max(0.0, 1.0 - w * w));
        p[0] += rc * sth;
        p[2] += rc * w;
    }
    return p;
}

ExitHistogram estimate_exit_histogram(const Domain& D, const Point& x,
                                      const std::vector<double>& edges,
                                      int n_angular, std::uint64_t n,
                                      const SubordinatorStepper& st,
                                      std::uint64_t seed,
                                      const StepControl& ctrl, int workers) {
    if (D.shape() != geometry::Domain::Shape::Ball)
        throw std::invalid_argument("estimate_exit_histogram: ball domains only");
    if (edges.size() < 2 || edges.front() != 0.0)
        throw std::invalid_argument("estimate_exit_histogram: edges[0] must be 0");
    if (!std::is_sorted(edges.begin(), edges.end()))
        throw std::invalid_argument("estimate_exit_histogram: edges not sorted");
    if (edges.back() < 1.0)
        throw std::invalid_argument(
            "estimate_exit_histogram: bins must cover dist(z, D) <= 1");
    if (n_angular < 1)
        throw std::invalid_argument("estimate_exit_histogram: n_angular >= 1");
    if (n < 10000)
        throw std::invalid_argument("estimate_exit_histogram: need N >= 1e4");

    const int d = D.dim();
    const double R = D.radius();
    const Point c = D.center();
    const std::size_t shells = edges.size() - 1;
    const std::size_t nbins = shells * static_cast<std::size_t>(n_angular);
    const std::int32_t kTail = static_cast<std::int32_t>(nbins);

    std::vector<std::int32_t> bin_of(n);
    num::parallel_chunks(
        n, workers, [&](std::uint64_t, std::uint64_t b, std::uint64_t e) {
            for (std::uint64_t i = b; i < e; ++i) {
                rng::Philox g(seed, i);
                ExitSample s = sample_exit(D, x, st, ctrl, g);
                if (s.censored) {
                    bin_of[i] = -1;
                    continue;
                }
                Point z = s.exit_pos;
                double dist = geometry::distance(z, c, d) - R;
                if (dist >= edges.back()) {
                    bin_of[i] = kTail;
                    continue;
                }
                std::size_t k =
                    static_cast<std::size_t>(
                        std::upper_bound(edges.begin(), edges.end(), dist) -
                        edges.begin()) -
                    1;
                if (k >= shells) k = shells - 1;
                double frac;
                if (d == 2) {
                    double th = std::atan2(z[1] - c[1], z[0] - c[0]);
                    frac = (th + kPi) / (2.0 * kPi);
                } else {
                    double w = (z[2] - c[2]) / geometry::distance(z, c, d);
                    frac = 0.5 * (w + 1.0);
                }
                auto j = static_cast<std::size_t>(frac * n_angular);
                if (j >= static_cast<std::size_t>(n_angular))
                    j = static_cast<std::size_t>(n_angular) - 1;
                bin_of[i] = static_cast<std::int32_t>(
                    k * static_cast<std::size_t>(n_angular) + j);
            }
        });

    ExitHistogram h;
    h.edges = edges;
    h.n_angular = n_angular;
    h.center = c;
    h.radius = R;
    h.d = d;
    h.counts.assign(nbins, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::int32_t b = bin_of[i];
        if (b < 0)
            ++h.censored;
        else if (b == kTail)
            ++h.tail;
        else
            ++h.counts[static_cast<std::size_t>(b)];
    }
    h.n = n - h.censored;

    h.volumes.resize(nbins);
    h.density.resize(nbins);
    h.undersampled.resize(nbins);
    for (std::size_t k = 0; k < shells; ++k) {
        double a = R + edges[k], b = R + edges[k + 1];
        double shell_vol = (d == 2)
                               ? kPi * (b * b - a * a)
                               : (4.0 / 3.0) * kPi * (b * b * b - a * a * a);
        for (std::size_t j = 0; j < static_cast<std::size_t>(n_angular); ++j) {
            std::size_t idx = k * static_cast<std::size_t>(n_angular) + j;
            h.volumes[idx] = shell_vol / n_angular;
            h.density[idx] = h.n ? static_cast<double>(h.counts[idx]) /
                                       (static_cast<double>(h.n) * h.volumes[idx])
                                 : 0.0;
            h.undersampled[idx] = h.counts[idx] < 50 ? 1 : 0;
        }
    }
    return h;
}

HarmonicityReport harmonicity_check(const Domain& D, const ExteriorFunction& f,
                                    const Point& x, double rho,
                                    std::uint64_t n,
                                    const SubordinatorStepper& st,
                                    std::uint64_t seed,
                                    const StepControl& ctrl) {
    if (!(rho > 0.0) || D.dist_to_boundary(x) <= rho)
        throw std::invalid_argument(
            "harmonicity_check: closure of B(x, rho) must lie inside D");
    if (n < 32)
        throw std::invalid_argument("harmonicity_check: need n >= 32");

    HarmonicEstimate direct = estimate_u_f(
        D, f, x, std::max<std::uint64_t>(n, 1000), st, rng::mix(seed, 0xD1), ctrl);

    Domain ball = Domain::ball(x, rho, D.dim());
    std::vector<double> vals(n, 0.0);
    std::vector<std::uint8_t> skip(n, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        rng::Philox g(rng::mix(seed, 0xA17E5), i);
        ExitSample outer = sample_exit(ball, x, st, ctrl, g);
        if (outer.censored) {
            skip[i] = 1;
            continue;
        }
        if (!D.contains(outer.exit_pos)) {
            vals[i] = f(outer.exit_pos);
            continue;
        }
        double sum = 0.0;
        std::uint64_t cnt = 0;
        std::uint64_t inner_seed = rng::mix(rng::mix(seed, 0x1226), i);
        for (std::uint64_t j = 0; j < n; ++j) {
            rng::Philox gj(inner_seed, j);
            ExitSample inner = sample_exit(D, outer.exit_pos, st, ctrl, gj);
            if (inner.censored) continue;
            sum += f(inner.exit_pos);
            ++cnt;
        }
        if (cnt == 0) {
            skip[i] = 1;
            continue;
        }
        vals[i] = sum / static_cast<double>(cnt);
    }
    BatchStats nested = batch_reduce(vals, skip);

    HarmonicityReport rep;
    rep.direct = direct.value;
    rep.direct_se = direct.se;
    rep.nested = nested.mean;
    rep.nested_se = nested.se;
    rep.diff = rep.nested - rep.direct;
    rep.combined_se = std::hypot(rep.direct_se, rep.nested_se);
    rep.pass = std::fabs(rep.diff) <= 3.0 * rep.combined_se;
    return rep;
}

std::vector<DecayRow> boundary_decay_check(const Domain& D, const Point& xi,
                                           double r0,
                                           const std::vector<Point>& points,
                                           std::uint64_t n,
                                           const SubordinatorStepper& st,
                                           std::uint64_t seed,
                                           const StepControl& ctrl) {
    if (!(r0 > 0.0))
        throw std::invalid_argument("boundary_decay_check: r0 > 0");
    const int d = D.dim();
    std::vector<DecayRow> table;
    table.reserve(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Point& p = points[k];
        if (!D.contains(p) ||
            geometry::distance(p, xi, d) > r0 / 8.0 + 1e-12)
            throw std::invalid_argument(
                "boundary_decay_check: points must lie in D and B(xi, r0/8)");
        std::uint64_t hits = 0, kept = 0;
        std::uint64_t sk = rng::mix(rng::mix(seed, 0xDECA), k);
        for (std::uint64_t i = 0; i < n; ++i) {
            rng::Philox g(sk, i);
            ExitSample s = sample_exit(D, p, st, ctrl, g);
            if (s.censored) continue;
            ++kept;
            if (geometry::distance(s.exit_pos, xi, d) >= r0) ++hits;
        }
        DecayRow row;
        row.x = p;
        row.delta = D.dist_to_boundary(p);
        if (kept) {
            double ph = static_cast<double>(hits) / static_cast<double>(kept);
            row.u2 = ph;
            row.se = std::sqrt(ph * (1.0 - ph) /
                               static_cast<double>(kept));
        }
        table.push_back(row);
    }
    return table;
}

namespace {

template <typename T>
void raw_write(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void raw_read(std::ifstream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void write_exit_spool(const std::string& path,
                      const std::vector<ExitSample>& samples, int d) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("exit spool: cannot open " + path);
    os.write("SBXS", 4);
    raw_write(os, std::uint32_t{1});
    raw_write(os, static_cast<std::uint32_t>(d));
    raw_write(os, static_cast<std::uint64_t>(samples.size()));
    for (const auto& s : samples)
        for (int i = 0; i < d; ++i) raw_write(os, s.x[i]);
    for (const auto& s : samples) raw_write(os, s.tau);
    for (const auto& s : samples)
        for (int i = 0; i < d; ++i) raw_write(os, s.exit_pos[i]);
    for (const auto& s : samples)
        for (int i = 0; i < d; ++i) raw_write(os, s.pre_exit[i]);
    for (const auto& s : samples) raw_write(os, s.steps);
    for (const auto& s : samples) raw_write(os, s.min_delta);
    for (const auto& s : samples)
        raw_write(os, static_cast<std::uint8_t>(s.censored ? 1 : 0));
    if (!os) throw std::runtime_error("exit spool: write failed " + path);
}

std::vector<ExitSample> read_exit_spool(const std::string& path, int* d_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("exit spool: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SBXS", 4) != 0)
        throw std::runtime_error("exit spool: bad magic");
    std::uint32_t version = 0, dim = 0;
    std::uint64_t count = 0;
    raw_read(is, version);
    raw_read(is, dim);
    raw_read(is, count);
    if (version != 1) throw std::runtime_error("exit spool: bad version");
    if (dim < 1 || dim > 3) throw std::runtime_error("exit spool: bad dim");
    std::vector<ExitSample> samples(count);
    int d = static_cast<int>(dim);
    for (auto& s : samples)
        for (int i = 0; i < d; ++i) raw_read(is, s.x[i]);
    for (auto& s : samples) raw_read(is, s.tau);
    for (auto& s : samples)
        for (int i = 0; i < d; ++i) raw_read(is, s.exit_pos[i]);
    for (auto& s : samples)
        for (int i = 0; i < d; ++i) raw_read(is, s.pre_exit[i]);
    for (auto& s : samples) raw_read(is, s.steps);
    for (auto& s : samples) raw_read(is, s.min_delta);
    for (auto& s : samples) {
        std::uint8_t flags = 0;
        raw_read(is, flags);
        s.censored = (flags & 1) != 0;
    }
    if (!is) throw std::runtime_error("exit spool: truncated file");
    if (d_out) *d_out = d;
    return samples;
}

}  // namespace sblab::mc
