//! Gauss-Legendre rules and Hermite interpolation on node data.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Cubic Hermite interpolant through `(x0, f0, d0)` and `(x1, f1, d1)`.
pub fn hermite3(x0: f64, f0: f64, d0: f64, x1: f64, f1: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * f0 + (t3 - 2.0 * t2 + t) * h * d0 + (-2.0 * t3 + 3.0 * t2) * f1 + (t3 - t2) * h * d1
}

/// Derivative of [`hermite3`].
pub fn hermite3_derivative(x0: f64, f0: f64, d0: f64, x1: f64, f1: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    ((6.0 * t2 - 6.0 * t) * f0
        + (3.0 * t2 - 4.0 * t + 1.0) * h * d0
        + (-6.0 * t2 + 6.0 * t) * f1
        + (3.0 * t2 - 2.0 * t) * h * d1)
        / h
}

/// End data `(f, f', f'')` for quintic Hermite interpolation.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub x: f64,
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Quintic Hermite interpolant matching value, first and second derivative
/// at both ends. Returns `(f(x), f'(x))`.
pub fn hermite5(left: &Jet, right: &Jet, x: f64) -> (f64, f64) {
    let h = right.x - left.x;
    let t = (x - left.x) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h00 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h10 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h20 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    let h01 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h11 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h21 = 0.5 * (t3 - 2.0 * t4 + t5);
    let value = h00 * left.f
        + h10 * h * left.d1
        + h20 * h * h * left.d2
        + h01 * right.f
        + h11 * h * right.d1
        + h21 * h * h * right.d2;

    let dh00 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    let dh10 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    let dh20 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
    let dh01 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    let dh11 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    let dh21 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
    let deriv = (dh00 * left.f
        + dh10 * h * left.d1
        + dh20 * h * h * left.d2
        + dh01 * right.f
        + dh11 * h * right.d1
        + dh21 * h * h * right.d2)
        / h;
    (value, deriv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_exactness() {
        let rule = GaussLegendre::new(8);
        // exact up to degree 15
        let val = rule.integrate(0.0, 2.0, |x| x.powi(15));
        assert_relative_eq!(val, 2f64.powi(16) / 16.0, max_relative = 1e-13);
        assert_relative_eq!(rule.weights.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
        let rule = GaussLegendre::new(20);
        assert_relative_eq!(rule.integrate(0.0, PI, f64::sin), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn hermite_reproduces_polynomials() {
        let f = |x: f64| 1.0 + 2.0 * x - x * x + 0.5 * x.powi(3);
        let df = |x: f64| 2.0 - 2.0 * x + 1.5 * x * x;
        let (a, b) = (0.3, 1.1);
        let x = 0.77;
        assert_relative_eq!(hermite3(a, f(a), df(a), b, f(b), df(b), x), f(x), max_relative = 1e-14);
        assert_relative_eq!(hermite3_derivative(a, f(a), df(a), b, f(b), df(b), x), df(x), max_relative = 1e-13);

        let g = |x: f64| x.powi(5) - 3.0 * x.powi(4) + x;
        let dg = |x: f64| 5.0 * x.powi(4) - 12.0 * x.powi(3) + 1.0;
        let ddg = |x: f64| 20.0 * x.powi(3) - 36.0 * x * x;
        let jet = |x| Jet { x, f: g(x), d1: dg(x), d2: ddg(x) };
        let (v, d) = hermite5(&jet(a), &jet(b), x);
        assert_relative_eq!(v, g(x), max_relative = 1e-13);
        assert_relative_eq!(d, dg(x), max_relative = 1e-12);
    }
}
