//! Gauss-Legendre quadrature on arbitrary intervals.
//!
//! All backbone integrals (mass matrix, gravity potential, basis functions)
//! share one fixed rule so that the regression side and the simulation side
//! evaluate identical discrete integrals.

/// Number of nodes used for every per-segment backbone integral.
pub const SEGMENT_RULE_POINTS: usize = 8;

/// A Gauss-Legendre rule with nodes/weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build an `n`-point rule by Newton iteration on the Legendre polynomial
    /// roots, seeded with the Chebyshev approximation.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for k in 0..n {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            nodes[n - 1 - k] = x;
            weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    }

    /// Node/weight pairs mapped onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// P_n(x) and P_n'(x) via the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let rule = GaussLegendre::new(8);
        // degree 15 monomial over [0, 2]: integral = 2^16/16 = 4096
        let val = rule.integrate(0.0, 2.0, |x| x.powi(15));
        assert_relative_eq!(val, 4096.0, max_relative = 1e-12);
    }

    #[test]
    fn trig_integral_high_accuracy() {
        let rule = GaussLegendre::new(SEGMENT_RULE_POINTS);
        let val = rule.integrate(0.0, 1.0, f64::sin);
        assert_relative_eq!(val, 1.0 - 1.0_f64.cos(), max_relative = 1e-12);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for n in 1..=12 {
            let rule = GaussLegendre::new(n);
            let total: f64 = rule.mapped(-3.0, 5.0).map(|(_, w)| w).sum();
            assert_relative_eq!(total, 8.0, max_relative = 1e-13);
        }
    }
}
