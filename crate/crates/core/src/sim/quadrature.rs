//! Gauss-Legendre rules.

/// A one-dimensional quadrature rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// `order`-point Gauss-Legendre rule on `[lo, hi]`.
    pub fn gauss_legendre(order: usize, lo: f64, hi: f64) -> Rule {
        let (x, w) = legendre_nodes(order);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Rule {
            nodes: x.iter().map(|t| mid + half * t).collect(),
            weights: w.iter().map(|v| v * half).collect(),
        }
    }

    /// `panels` equal panels on `[lo, hi]`, each with an `order`-point rule.
    pub fn composite(panels: usize, order: usize, lo: f64, hi: f64) -> Rule {
        let panels = panels.max(1);
        let (x, w) = legendre_nodes(order);
        let width = (hi - lo) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let a = lo + p as f64 * width;
            let mid = a + 0.5 * width;
            for (t, v) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * width * t);
                weights.push(v * 0.5 * width);
            }
        }
        Rule { nodes, weights }
    }

    /// Roughly `points` nodes split into panels of a 16-point rule.
    pub fn with_budget(points: usize, lo: f64, hi: f64) -> Rule {
        const ORDER: usize = 16;
        if points <= ORDER {
            return Rule::gauss_legendre(points.max(1), lo, hi);
        }
        Rule::composite(points.div_ceil(ORDER), ORDER, lo, hi)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
pub fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "rule needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `(P_n(z), P_n'(z))`.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        let r = Rule::gauss_legendre(5, -1.0, 2.0);
        // degree 9 is integrated exactly by 5 points
        let got = r.integrate(|x| x.powi(9) + 3.0 * x * x);
        let expected = (2f64.powi(10) - 1.0) / 10.0 + (8.0 + 1.0);
        assert!((got - expected).abs() < 1e-10, "{got} vs {expected}");
        let (_, w) = legendre_nodes(1);
        assert_eq!(w, vec![2.0]);
    }

    #[test]
    fn gaussian_integral() {
        let r = Rule::with_budget(200, -12.0, 12.0);
        let got = r.integrate(|x| (-0.5 * x * x).exp());
        assert!((got - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn weights_sum_to_length() {
        for n in [2, 7, 16, 33] {
            let r = Rule::gauss_legendre(n, 0.0, 3.0);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 3.0).abs() < 1e-13);
        }
    }
}
