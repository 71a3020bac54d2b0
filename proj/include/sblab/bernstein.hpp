#pragma once

#include <string>
#include <vector>

namespace sblab::bernstein {

// Laplace exponents phi of pure-jump subordinators (drift b = 0), restricted
// to the packaged parametric families:
//
//   stable                   lambda^(alpha/2),              alpha in (0,2]
//   power-sum                (lambda+lambda^alpha)^kappa,   alpha,kappa in (0,1)
//   relativistic             (lambda+m^(2/alpha))^(alpha/2)-m
//   stable-sum               lambda^(alpha/2)+lambda^(kappa/2), 0<=kappa<alpha
//   stable-log               lambda^(alpha/2)*log(1+lambda)^kappa,
//                            kappa in (-alpha/2, 1-alpha/2)
//   geometric                log(1+lambda^(alpha/2)),       alpha in (0,2]
//   relativistic-geometric   log(1+(lambda+m^(2/alpha))^(alpha/2)-m)
//
// Closed-form first and second derivatives are registered for every family;
// the Levy density chi of the subordinator is registered only where it has a
// closed form (stable and stable-sum).
class BernsteinFunction {
public:
    static BernsteinFunction make(const std::string& family, double alpha,
                                  double kappa = 0.0, double m = 0.0);

    double phi(double lambda) const;
    double phi_prime(double lambda) const;
    double phi_second(double lambda) const;

    // Central finite-difference fallback, step h = lambda * 1e-6.
    double phi_prime_fd(double lambda) const;

    bool has_chi() const;
    // Density of the subordinator Levy measure at t > 0 (throws without chi).
    double chi(double t) const;

    const std::string& family() const { return family_; }
    double alpha() const { return alpha_; }
    double kappa() const { return kappa_; }
    double m() const { return m_; }
    std::string label() const;

    static std::vector<std::string> family_names();

private:
    BernsteinFunction() = default;
    std::string family_;
    int code_ = 0;
    double alpha_ = 0.0, kappa_ = 0.0, m_ = 0.0;
    double a_ = 0.0;  // alpha/2 where applicable
    double big_m_ = 0.0;  // m^(2/alpha)
};

enum class Verdict { Holds, Fails, NotRequired };

const char* to_string(Verdict v);

struct ScanGrid {
    double t_max = 1e6;
    double lambda_min = 1e-6;
    double lambda_max = 1e6;
    int per_decade = 200;
};

// Worst-case slacks for the structural inequalities; values <= 0 mean the
// inequality held at every grid point (slack = max violation).
struct GlobalChecks {
    double berall_slack = 0.0;       // phi(t*lambda) <= t*phi(lambda), t >= 1
    double berall1_slack = 0.0;      // lambda*phi'(lambda) <= phi(lambda)
    double monotone_slack = 0.0;     // phi(lambda)/lambda nonincreasing
    double sign_slack = 0.0;         // phi > 0, phi' > 0, phi'' <= 0
    double zero_limit = 0.0;         // phi(1e-12)
    double infinity_ratio = 0.0;     // phi(1e12)/phi(1)
    bool ok = false;
};

struct FitA3 {
    Verdict verdict = Verdict::Fails;
    double delta = 0.0;
    double sigma = 0.0;
    double lambda0 = 1.0;
    ScanGrid grid;
};

struct FitLower {
    Verdict verdict = Verdict::Fails;
    double exponent = 0.0;  // delta0 for A-4, delta1 for A-5
    double sigma = 0.0;     // sigma0 / sigma1
    bool side_ok = false;   // delta0 < 2*delta resp. delta1 in [delta, 1)
    double lambda0 = 1.0;
};

struct A6Result {
    Verdict verdict = Verdict::Fails;
    bool converges = false;
    double fitted_exponent = 0.0;  // small-lambda power of the integrand
    double integral = 0.0;         // finite only when converges
    double theta = 1.0;
    int d = 0;
};

struct HupResult {
    Verdict verdict = Verdict::Fails;
    double c = 0.0;
    double eps = 0.0;
    double delta = 0.0;
    double lambda0 = 1.0;
};

struct AssumptionWitness {
    std::string family;
    double alpha = 0.0, kappa = 0.0, m = 0.0;
    int d = 0;
    double lambda0 = 1.0;
    GlobalChecks global;
    FitA3 a3;
    FitLower a4;
    FitLower a5;
    A6Result a6;
    HupResult hup;
};

GlobalChecks verify_global_inequalities(const BernsteinFunction& f,
                                        const ScanGrid& grid = {});

// Largest delta on the 1e-3 lattice such that phi'(lambda*t)/phi'(lambda)
// <= sigma * t^(-delta) on the scanned grid without the supremum being
// edge-dominated in t; sigma is the observed supremum times 1.001.
FitA3 fit_A3(const BernsteinFunction& f, double lambda0,
             const ScanGrid& grid = {});

enum class LowerKind { A4, A5 };

// Smallest admissible exponent for the lower scaling bounds (A-4 on phi',
// A-5 on phi); `delta` is the fitted A-3 exponent used in side conditions.
FitLower fit_lower_scaling(const BernsteinFunction& f, double lambda0,
                           const ScanGrid& grid, LowerKind kind, double delta);

// Transience integral of lambda^(d/2-1)/phi(lambda) near zero.
A6Result check_A6(const BernsteinFunction& f, int d, double theta = 1.0);

// Fitted constant for phi(lambda*x)/phi(lambda) <= c * x^(1-delta+eps).
HupResult check_Hup(const BernsteinFunction& f, double eps, double lambda0,
                    double delta, const ScanGrid& grid = {});

AssumptionWitness certify(const BernsteinFunction& f, int d, double lambda0,
                          const ScanGrid& grid = {});

} // namespace sblab::bernstein
