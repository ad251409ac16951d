//! Golden-section search for unimodal functions on a bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub location: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Maximizes a unimodal `f` on `[lo, hi]` until the bracket is below `xtol`.
pub fn maximize<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Extremum {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a) > xtol && iterations < 500 {
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    let (location, value) = if fc >= fd { (c, fc) } else { (d, fd) };
    Extremum { location, value, iterations }
}

/// Minimizes a unimodal `f` on `[lo, hi]`.
pub fn minimize<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Extremum {
    let e = maximize(|x| -f(x), lo, hi, xtol);
    Extremum { value: -e.value, ..e }
}
