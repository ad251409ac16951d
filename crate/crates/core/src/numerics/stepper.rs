//! Dormand-Prince 5(4) stepper for autonomous scalar ODEs `y' = f(y)` with a
//! terminal event.

#[derive(Debug, Clone, Copy)]
pub struct StepperOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for StepperOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, initial_step: 1e-4, max_step: f64::INFINITY, max_steps: 200_000 }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<(f64, f64)>,
    /// Location where the event fired, linearly interpolated inside the
    /// last step.
    pub event: Option<f64>,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates from `(x0, y0)` up to `x_end`, stopping early when `event(y)`
/// becomes true.
pub fn integrate<F, E>(f: F, x0: f64, y0: f64, x_end: f64, opts: &StepperOptions, event: E) -> Trajectory
where
    F: Fn(f64) -> f64,
    E: Fn(f64) -> bool,
{
    let mut points = vec![(x0, y0)];
    let (mut x, mut y) = (x0, y0);
    let mut h = opts.initial_step.min(x_end - x0);
    let mut k1 = f(y);

    for _ in 0..opts.max_steps {
        if x >= x_end {
            break;
        }
        h = h.min(x_end - x).min(opts.max_step);
        let k2 = f(y + h * A21 * k1);
        let k3 = f(y + h * (A31 * k1 + A32 * k2));
        let k4 = f(y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = f(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
        let k6 = f(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        let y_new = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        let k7 = f(y_new);
        let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let scale = opts.abs_tol + opts.rel_tol * y.abs().max(y_new.abs());
        let ratio = (err / scale).abs();

        if ratio <= 1.0 && y_new.is_finite() {
            let x_new = x + h;
            if event(y_new) {
                let t = if y_new != y { y / (y - y_new) } else { 1.0 };
                let xe = x + h * t.clamp(0.0, 1.0);
                points.push((x_new, y_new));
                return Trajectory { points, event: Some(xe) };
            }
            x = x_new;
            y = y_new;
            k1 = k7;
            points.push((x, y));
        }
        let factor = if !y_new.is_finite() || !ratio.is_finite() {
            0.2
        } else if ratio == 0.0 {
            5.0
        } else {
            (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < 1e-15 * x.abs().max(1.0) {
            break;
        }
    }
    Trajectory { points, event: None }
}
