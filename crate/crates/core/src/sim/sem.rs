use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

use super::dataset::{default_names, Dataset, Domain};
use super::seeds::split_seed;
use crate::error::{Error, Result};
use crate::graph::{format_dag, parse_dag, Dag};

/// Half-width, in noise standard deviations, of the box used for quadrature.
const TAIL_SDS: f64 = 9.0;

/// Scalar transformation used by the nonlinear mechanisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Link {
    Identity,
    Sin,
    Tanh,
    Quadratic,
    Sinh,
}

impl Link {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Link::Identity => x,
            Link::Sin => x.sin(),
            Link::Tanh => x.tanh(),
            Link::Quadratic => x * x,
            Link::Sinh => x.sinh(),
        }
    }

    pub fn is_invertible(self) -> bool {
        matches!(self, Link::Identity | Link::Tanh | Link::Sinh)
    }

    /// Inverse and `|d inverse / dy|` at `y`, or `None` outside the image.
    fn invert(self, y: f64) -> Option<(f64, f64)> {
        match self {
            Link::Identity => Some((y, 1.0)),
            Link::Tanh if y.abs() < 1.0 => Some((y.atanh(), 1.0 / (1.0 - y * y))),
            Link::Sinh => Some((y.asinh(), 1.0 / (1.0 + y * y).sqrt())),
            _ => None,
        }
    }

    /// Image of `[lo, hi]`.
    fn image(self, lo: f64, hi: f64) -> (f64, f64) {
        match self {
            Link::Identity => (lo, hi),
            Link::Tanh => (lo.tanh(), hi.tanh()),
            Link::Sinh => (lo.sinh(), hi.sinh()),
            Link::Quadratic => {
                let top = (lo * lo).max(hi * hi);
                if lo <= 0.0 && hi >= 0.0 {
                    (0.0, top)
                } else {
                    ((lo * lo).min(hi * hi), top)
                }
            }
            Link::Sin => {
                if hi - lo >= 2.0 * std::f64::consts::PI {
                    return (-1.0, 1.0);
                }
                let (mut a, mut b) = (lo.sin().min(hi.sin()), lo.sin().max(hi.sin()));
                // interior extrema at pi/2 + k pi
                let first = ((lo - std::f64::consts::FRAC_PI_2) / std::f64::consts::PI).ceil() as i64;
                let mut k = first;
                loop {
                    let x = std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::PI;
                    if x > hi {
                        break;
                    }
                    a = a.min(x.sin());
                    b = b.max(x.sin());
                    k += 1;
                }
                (a, b)
            }
        }
    }
}

/// Conditional distribution of one vertex given its parents, in sorted
/// parent order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Mechanism {
    /// `x = intercept + sum_k c_k x_k + e`, `e ~ N(0, noise_var)`.
    LinearGaussian {
        coefficients: Vec<f64>,
        noise_var: f64,
        #[serde(default)]
        intercept: f64,
    },
    /// `x = amplitude * sum_k link(x_k) + e`.
    AdditiveNonlinear {
        function: Link,
        amplitude: f64,
        noise_var: f64,
    },
    /// `x = outer(amplitude * sum_k inner(x_k) + e)` with `outer` invertible.
    PostNonlinear {
        inner: Link,
        outer: Link,
        amplitude: f64,
        noise_var: f64,
    },
    /// Mixture of Gaussian bumps truncated to `[0, 1]`. Bump `c` is centred at
    /// `locations[c] + sum_k shifts[k] * x_k`; empty `shifts` means no
    /// dependence on the parents.
    MixtureCpd {
        weights: Vec<f64>,
        locations: Vec<f64>,
        scales: Vec<f64>,
        #[serde(default)]
        shifts: Vec<f64>,
    },
}

impl Mechanism {
    fn validate(&self, j: usize, n_parents: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(format!("vertex {}: {msg}", j + 1)));
        let positive = |v: f64| v > 0.0 && v.is_finite();
        match self {
            Mechanism::LinearGaussian {
                coefficients,
                noise_var,
                intercept,
            } => {
                if coefficients.len() != n_parents {
                    return bad(format!("{} coefficients for {n_parents} parents", coefficients.len()));
                }
                if !positive(*noise_var) {
                    return bad("noise variance must be positive".into());
                }
                if !intercept.is_finite() || coefficients.iter().any(|c| !c.is_finite()) {
                    return bad("non-finite coefficient".into());
                }
            }
            Mechanism::AdditiveNonlinear {
                amplitude, noise_var, ..
            } => {
                if !positive(*noise_var) || !amplitude.is_finite() {
                    return bad("noise variance must be positive and amplitude finite".into());
                }
            }
            Mechanism::PostNonlinear {
                outer,
                amplitude,
                noise_var,
                ..
            } => {
                if !outer.is_invertible() {
                    return bad(format!("outer function {outer:?} is not invertible"));
                }
                if !positive(*noise_var) || !amplitude.is_finite() {
                    return bad("noise variance must be positive and amplitude finite".into());
                }
            }
            Mechanism::MixtureCpd {
                weights,
                locations,
                scales,
                shifts,
            } => {
                let c = weights.len();
                if c == 0 || locations.len() != c || scales.len() != c {
                    return bad("weights, locations and scales must be non-empty and of equal length".into());
                }
                if weights.iter().any(|w| !positive(*w)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                    return bad("mixture weights must be positive and sum to 1".into());
                }
                if scales.iter().any(|s| !positive(*s)) || locations.iter().any(|m| !m.is_finite()) {
                    return bad("scales must be positive and locations finite".into());
                }
                if !shifts.is_empty() && shifts.len() != n_parents {
                    return bad(format!("{} shifts for {n_parents} parents", shifts.len()));
                }
                if shifts.iter().any(|s| !s.is_finite()) {
                    return bad("non-finite shift".into());
                }
            }
        }
        Ok(())
    }

    fn is_unit_interval(&self) -> bool {
        matches!(self, Mechanism::MixtureCpd { .. })
    }

    /// Deterministic part of the additive-noise mechanisms.
    fn location(&self, parents: &[f64]) -> f64 {
        match self {
            Mechanism::LinearGaussian {
                coefficients,
                intercept,
                ..
            } => intercept + coefficients.iter().zip(parents).map(|(c, x)| c * x).sum::<f64>(),
            Mechanism::AdditiveNonlinear {
                function, amplitude, ..
            } => amplitude * parents.iter().map(|x| function.apply(*x)).sum::<f64>(),
            Mechanism::PostNonlinear { inner, amplitude, .. } => {
                amplitude * parents.iter().map(|x| inner.apply(*x)).sum::<f64>()
            }
            Mechanism::MixtureCpd { .. } => 0.0,
        }
    }

    fn bump_centres<'a>(&'a self, parents: &'a [f64]) -> impl Iterator<Item = f64> + 'a {
        let (locations, shifts) = match self {
            Mechanism::MixtureCpd { locations, shifts, .. } => (&locations[..], &shifts[..]),
            _ => (&[][..], &[][..]),
        };
        let offset: f64 = shifts.iter().zip(parents).map(|(s, x)| s * x).sum();
        locations.iter().map(move |m| m + offset)
    }

    /// Conditional density at `x` given parent values.
    pub fn pdf(&self, x: f64, parents: &[f64]) -> f64 {
        match self {
            Mechanism::LinearGaussian { noise_var, .. } | Mechanism::AdditiveNonlinear { noise_var, .. } => {
                gaussian_pdf(x, self.location(parents), *noise_var)
            }
            Mechanism::PostNonlinear { outer, noise_var, .. } => match outer.invert(x) {
                Some((z, jac)) => gaussian_pdf(z, self.location(parents), *noise_var) * jac,
                None => 0.0,
            },
            Mechanism::MixtureCpd { weights, scales, .. } => {
                if !(0.0..=1.0).contains(&x) {
                    return 0.0;
                }
                weights
                    .iter()
                    .zip(scales)
                    .zip(self.bump_centres(parents))
                    .map(|((w, s), mu)| w * truncated_pdf(x, mu, *s))
                    .sum()
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, parents: &[f64], rng: &mut R) -> f64 {
        match self {
            Mechanism::LinearGaussian { noise_var, .. } | Mechanism::AdditiveNonlinear { noise_var, .. } => {
                let e: f64 = rng.sample(StandardNormal);
                self.location(parents) + noise_var.sqrt() * e
            }
            Mechanism::PostNonlinear { outer, noise_var, .. } => {
                let e: f64 = rng.sample(StandardNormal);
                outer.apply(self.location(parents) + noise_var.sqrt() * e)
            }
            Mechanism::MixtureCpd { weights, scales, .. } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = weights.len() - 1;
                for (c, w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        pick = c;
                        break;
                    }
                }
                let mu = self.bump_centres(parents).nth(pick).expect("component exists");
                sample_truncated(mu, scales[pick], rng.random())
            }
        }
    }

    /// Interval holding all but a negligible share of the conditional mass
    /// when the parents range over the given boxes.
    fn range(&self, parents: &[(f64, f64)]) -> (f64, f64) {
        let (lo, hi) = match self {
            Mechanism::LinearGaussian {
                coefficients,
                intercept,
                ..
            } => coefficients
                .iter()
                .zip(parents)
                .fold((*intercept, *intercept), |(a, b), (c, (l, h))| {
                    (a + (c * l).min(c * h), b + (c * l).max(c * h))
                }),
            Mechanism::AdditiveNonlinear {
                function, amplitude, ..
            }
            | Mechanism::PostNonlinear {
                inner: function,
                amplitude,
                ..
            } => parents.iter().fold((0.0, 0.0), |(a, b), (l, h)| {
                let (fl, fh) = function.image(*l, *h);
                (a + (amplitude * fl).min(amplitude * fh), b + (amplitude * fl).max(amplitude * fh))
            }),
            Mechanism::MixtureCpd { .. } => return (0.0, 1.0),
        };
        match self {
            Mechanism::LinearGaussian { noise_var, .. } | Mechanism::AdditiveNonlinear { noise_var, .. } => {
                let t = TAIL_SDS * noise_var.sqrt();
                (lo - t, hi + t)
            }
            Mechanism::PostNonlinear { outer, noise_var, .. } => {
                let t = TAIL_SDS * noise_var.sqrt();
                outer.image(lo - t, hi + t)
            }
            Mechanism::MixtureCpd { .. } => unreachable!(),
        }
    }
}

fn gaussian_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let z = x - mean;
    (-0.5 * z * z / var).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Mass of `N(mu, s^2)` on `[0, 1]`, computed in the lower tail for accuracy.
fn truncated_mass(mu: f64, s: f64) -> f64 {
    let n = std_normal();
    let (a, b) = (-mu / s, (1.0 - mu) / s);
    if a > 0.0 {
        n.cdf(-a) - n.cdf(-b)
    } else {
        n.cdf(b) - n.cdf(a)
    }
}

fn truncated_pdf(x: f64, mu: f64, s: f64) -> f64 {
    std_normal().pdf((x - mu) / s) / s / truncated_mass(mu, s)
}

/// Inverse-CDF draw from `N(mu, s^2)` truncated to `[0, 1]`.
fn sample_truncated(mu: f64, s: f64, u: f64) -> f64 {
    let n = std_normal();
    let (a, b) = (-mu / s, (1.0 - mu) / s);
    // work in the lower tail: flip when the interval lies above the mean
    let (flip, a, b) = if a > 0.0 { (true, -b, -a) } else { (false, a, b) };
    let (pa, pb) = (n.cdf(a), n.cdf(b));
    let z = if pb - pa > 1e-300 {
        n.inverse_cdf(pa + u * (pb - pa))
    } else {
        // interval far in the tail: exponential approximation near its top
        (b + (u.max(f64::MIN_POSITIVE)).ln() / b.abs()).max(a)
    };
    let z = if flip { -z } else { z };
    (mu + s * z).clamp(0.0, 1.0)
}

/// Structural equation model: a DAG plus one mechanism per vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemSpec {
    #[serde(serialize_with = "dag_to_text", deserialize_with = "dag_from_text")]
    pub dag: Dag,
    pub nodes: Vec<Mechanism>,
}

fn dag_to_text<S: Serializer>(g: &Dag, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_dag(g))
}

fn dag_from_text<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Dag, D::Error> {
    let text = String::deserialize(d)?;
    parse_dag(&text).map_err(serde::de::Error::custom)
}

impl SemSpec {
    pub fn new(dag: Dag, nodes: Vec<Mechanism>) -> Result<SemSpec> {
        let spec = SemSpec { dag, nodes };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<SemSpec> {
        let spec: SemSpec = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.dag.n_vertices() {
            return Err(Error::InvalidSpec(format!(
                "{} mechanisms for {} vertices",
                self.nodes.len(),
                self.dag.n_vertices()
            )));
        }
        for (j, m) in self.nodes.iter().enumerate() {
            m.validate(j, self.dag.parents(j).len())?;
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.dag.n_vertices()
    }

    pub fn domain(&self) -> Domain {
        if self.nodes.iter().all(Mechanism::is_unit_interval) {
            Domain::UnitCube
        } else {
            Domain::Unbounded
        }
    }

    /// `f_j(x_j | x_pa(j))` read from a full vertex vector.
    pub fn conditional_pdf(&self, j: usize, x: &[f64]) -> f64 {
        let parents: Vec<f64> = self.dag.parents(j).iter().map(|k| x[k]).collect();
        self.nodes[j].pdf(x[j], &parents)
    }

    /// Joint density: the product of the conditionals.
    pub fn joint_pdf(&self, x: &[f64]) -> f64 {
        (0..self.n_vertices()).map(|j| self.conditional_pdf(j, x)).product()
    }

    /// Per-vertex intervals holding all but a negligible share of the mass.
    pub fn support_box(&self) -> Vec<(f64, f64)> {
        let mut bounds = vec![(0.0, 0.0); self.n_vertices()];
        for j in self.dag.topological_order() {
            let parents: Vec<(f64, f64)> = self.dag.parents(j).iter().map(|k| bounds[k]).collect();
            bounds[j] = self.nodes[j].range(&parents);
        }
        bounds
    }

    /// Covariance of an all-linear-Gaussian model.
    pub fn linear_covariance(&self) -> Option<DMatrix<f64>> {
        let d = self.n_vertices();
        let mut b = DMatrix::zeros(d, d);
        let mut noise = DMatrix::zeros(d, d);
        for (j, m) in self.nodes.iter().enumerate() {
            let Mechanism::LinearGaussian {
                coefficients,
                noise_var,
                ..
            } = m
            else {
                return None;
            };
            for (k, c) in self.dag.parents(j).iter().zip(coefficients) {
                b[(j, k)] = *c;
            }
            noise[(j, j)] = *noise_var;
        }
        let inv = (DMatrix::identity(d, d) - b).try_inverse()?;
        Some(&inv * noise * inv.transpose())
    }
}

/// Draw `n` rows ancestrally. Row `i` uses its own ChaCha stream, so any row
/// can be regenerated independently of the others.
pub fn sample(spec: &SemSpec, n: usize, seed: u64) -> Result<Dataset> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Config("sample size must be positive".into()));
    }
    let d = spec.n_vertices();
    let order = spec.dag.topological_order();
    let parent_lists: Vec<Vec<usize>> = (0..d).map(|j| spec.dag.parents(j).to_vec()).collect();
    let mut columns = vec![vec![0.0; n]; d];
    let mut row = vec![0.0; d];
    let mut pa = Vec::with_capacity(d);
    for i in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        for &j in &order {
            pa.clear();
            pa.extend(parent_lists[j].iter().map(|&k| row[k]));
            row[j] = spec.nodes[j].sample(&pa, &mut rng);
        }
        for (col, v) in columns.iter_mut().zip(&row) {
            col[i] = *v;
        }
    }
    Dataset::new(default_names(d), columns, spec.domain())
}

/// Uniformly random vertex order; each forward pair is joined independently
/// with probability `edge_prob`.
pub fn random_dag(d: usize, edge_prob: f64, seed: u64) -> Result<Dag> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::Config(format!("edge probability {edge_prob} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            if rng.random_bool(edge_prob) {
                edges.push((order[a], order[b]));
            }
        }
    }
    Dag::from_edges(d, &edges)
}

/// Random DAG with linear-Gaussian mechanisms; coefficient magnitudes are
/// uniform on `coef_range` with random signs.
pub fn random_linear_sem(
    d: usize,
    edge_prob: f64,
    coef_range: (f64, f64),
    noise_var: f64,
    seed: u64,
) -> Result<SemSpec> {
    let dag = random_dag(d, edge_prob, split_seed(seed, "dag"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, "coefficients"));
    let nodes = (0..d)
        .map(|j| Mechanism::LinearGaussian {
            coefficients: (0..dag.parents(j).len())
                .map(|_| signed_uniform(&mut rng, coef_range))
                .collect(),
            noise_var,
            intercept: 0.0,
        })
        .collect();
    SemSpec::new(dag, nodes)
}

/// Random DAG with additive-noise mechanisms `amplitude * sum link(x_k)`.
pub fn random_additive_sem(
    d: usize,
    edge_prob: f64,
    function: Link,
    amplitude_range: (f64, f64),
    noise_var: f64,
    seed: u64,
) -> Result<SemSpec> {
    let dag = random_dag(d, edge_prob, split_seed(seed, "dag"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, "amplitudes"));
    let nodes = (0..d)
        .map(|_| Mechanism::AdditiveNonlinear {
            function,
            amplitude: signed_uniform(&mut rng, amplitude_range),
            noise_var,
        })
        .collect();
    SemSpec::new(dag, nodes)
}

fn signed_uniform<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    let m = if hi > lo { rng.random_range(lo..hi) } else { lo };
    if rng.random_bool(0.5) {
        m
    } else {
        -m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::quadrature::Rule;

    fn chain_spec() -> SemSpec {
        let lg = |c: Vec<f64>| Mechanism::LinearGaussian {
            coefficients: c,
            noise_var: 1.0,
            intercept: 0.0,
        };
        SemSpec::new(parse_dag("[∅|1|2]").unwrap(), vec![lg(vec![]), lg(vec![1.0]), lg(vec![1.0])]).unwrap()
    }

    fn mixture_spec() -> SemSpec {
        let m = |shifts: Vec<f64>| Mechanism::MixtureCpd {
            weights: vec![0.3, 0.7],
            locations: vec![0.2, 0.7],
            scales: vec![0.1, 0.25],
            shifts,
        };
        SemSpec::new(parse_dag("[∅|1]").unwrap(), vec![m(vec![]), m(vec![0.5])]).unwrap()
    }

    #[test]
    fn random_dag_extremes_and_determinism() {
        assert_eq!(random_dag(5, 0.0, 1).unwrap(), Dag::empty(5));
        assert_eq!(random_dag(5, 1.0, 1).unwrap().n_edges(), 10);
        assert_eq!(random_dag(6, 0.5, 42).unwrap(), random_dag(6, 0.5, 42).unwrap());
        assert!(random_dag(3, 1.5, 0).is_err());
    }

    #[test]
    fn chain_sample_moments() {
        let n = 100_000;
        let ds = sample(&chain_spec(), n, 11).unwrap();
        let tol = 3.0 / (n as f64).sqrt();
        let corr = |a: usize, b: usize| {
            let (ma, mb) = (ds.mean(a), ds.mean(b));
            let cov: f64 = ds.column(a).iter().zip(ds.column(b)).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>()
                / (n - 1) as f64;
            cov / (ds.variance(a) * ds.variance(b)).sqrt()
        };
        assert!((corr(0, 1) - 0.5f64.sqrt()).abs() < tol, "{}", corr(0, 1));
        let (r12, r13, r23) = (corr(0, 1), corr(0, 2), corr(1, 2));
        let partial = (r13 - r12 * r23) / ((1.0 - r12 * r12) * (1.0 - r23 * r23)).sqrt();
        assert!(partial.abs() < tol, "{partial}");
    }

    #[test]
    fn analytic_covariance_of_chain() {
        let s = chain_spec().linear_covariance().unwrap();
        assert_eq!(s[(2, 2)], 3.0);
        assert_eq!(s[(0, 2)], 1.0);
    }

    #[test]
    fn sampling_is_deterministic_and_row_local() {
        let a = sample(&chain_spec(), 50, 3).unwrap();
        let b = sample(&chain_spec(), 80, 3).unwrap();
        assert_eq!(a.row(49), b.row(49));
        assert_ne!(sample(&chain_spec(), 50, 4).unwrap(), a);
    }

    #[test]
    fn mixture_samples_stay_in_unit_cube() {
        let ds = sample(&mixture_spec(), 5000, 9).unwrap();
        assert_eq!(ds.domain(), Domain::UnitCube);
        assert!(ds.columns().iter().flatten().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn joint_densities_integrate_to_one() {
        for spec in [mixture_spec(), chain_spec()] {
            let b = spec.support_box();
            let rules: Vec<Rule> = b.iter().map(|(lo, hi)| Rule::with_budget(64, *lo, *hi)).collect();
            let mut total = 0.0;
            let d = spec.n_vertices();
            let mut idx = vec![0usize; d];
            loop {
                let x: Vec<f64> = (0..d).map(|a| rules[a].nodes[idx[a]]).collect();
                let w: f64 = (0..d).map(|a| rules[a].weights[idx[a]]).product();
                total += w * spec.joint_pdf(&x);
                let mut a = 0;
                while a < d {
                    idx[a] += 1;
                    if idx[a] < rules[a].len() {
                        break;
                    }
                    idx[a] = 0;
                    a += 1;
                }
                if a == d {
                    break;
                }
            }
            assert!((total - 1.0).abs() < 1e-4, "{total}");
        }
    }

    #[test]
    fn post_nonlinear_density_and_validation() {
        let m = Mechanism::PostNonlinear {
            inner: Link::Sin,
            outer: Link::Tanh,
            amplitude: 1.0,
            noise_var: 0.5,
        };
        let r = Rule::with_budget(400, -1.0, 1.0);
        let mass = r.integrate(|y| m.pdf(y, &[0.3]));
        assert!((mass - 1.0).abs() < 1e-4, "{mass}");
        let bad = Mechanism::PostNonlinear {
            inner: Link::Tanh,
            outer: Link::Quadratic,
            amplitude: 1.0,
            noise_var: 1.0,
        };
        assert!(SemSpec::new(Dag::empty(1), vec![bad]).is_err());
    }

    #[test]
    fn json_round_trip_and_shape_checks() {
        let spec = mixture_spec();
        let back = SemSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        let text = r#"{"dag":"[∅|1]","nodes":[{"type":"linear_gaussian","coefficients":[],"noise_var":1},
            {"type":"linear_gaussian","coefficients":[],"noise_var":1}]}"#;
        assert!(SemSpec::from_json(text).is_err());
    }

    #[test]
    fn truncated_sampler_handles_far_tails() {
        for mu in [-40.0, 0.5, 40.0] {
            for u in [0.0, 0.3, 0.999] {
                let x = sample_truncated(mu, 0.1, u);
                assert!((0.0..=1.0).contains(&x));
            }
        }
    }
}
