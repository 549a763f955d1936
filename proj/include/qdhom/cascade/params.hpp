#pragma once

#include <optional>
#include <string_view>

namespace qdhom::cascade {

enum class Line { biexciton, exciton };

std::string_view to_string(Line line);
Line parse_line(std::string_view name);  // "biexciton"/"b" or "exciton"/"x"

// Gaussian two-photon excitation pulse. `area` is the pulse area in rad of the
// effective b-g coupling (pi inverts g -> b).
struct PulseDrive {
    double area = 3.141592653589793;
    double fwhm_ps = 5.0;
};

enum class InitialState { biexciton_prepared, pulse_driven };

// Rates in 1/ps. deph_* are pure-dephasing projector rates; the projectors
// enter the generator at 2*deph so that each adds deph to a coherence decay.
struct QDParams {
    double gamma_b = 0.0;
    double gamma_x = 0.0;
    double deph_b = 0.0;
    double deph_x = 0.0;
    InitialState initial_state = InitialState::biexciton_prepared;
    PulseDrive pulse{};

    static QDParams from_lifetimes(double t1_b_ps, double t1_x_ps, double deph_b = 0.0,
                                   double deph_x = 0.0);

    double t1_b() const { return 1.0 / gamma_b; }
    double t1_x() const { return 1.0 / gamma_x; }
    double max_t1() const;

    // Throws ValidationError.
    void validate() const;
};

struct SensorParams {
    double epsilon = 0.0;  // coupling, 1/ps
    double gamma_s = 0.0;  // linewidth, 1/ps
    Line line = Line::biexciton;

    // Throws ValidationError; warns when epsilon > gamma_s / 10.
    void validate() const;
};

// epsilon = eps_rel * gamma_b, gamma_s = width_rel * (gamma_b + gamma_x).
SensorParams default_sensor(const QDParams& p, Line line, double eps_rel = 0.01,
                            double width_rel = 100.0);

// Closed-form decay rate of the bare transition coherence of a line, 1/ps:
// biexciton (gamma_b + gamma_x)/2 + deph_b + deph_x, exciton gamma_x/2 + deph_x.
double coherence_rate(const QDParams& p, Line line);

struct DephasingRates {
    double deph_b;
    double deph_x;
};

// Projector rates that give coherence times (t2_b, t2_x):
//   deph_x = 1/t2_x - gamma_x/2,  deph_b = 1/t2_b - (gamma_b + gamma_x)/2 - deph_x.
// nullopt when either would be negative.
std::optional<DephasingRates> try_dephasing_from_t2(double gamma_b, double gamma_x, double t2_b,
                                                    double t2_x);
// Same, throwing ValidationError for infeasible pairs.
DephasingRates dephasing_from_t2(double gamma_b, double gamma_x, double t2_b, double t2_x);

}  // namespace qdhom::cascade
