//! Hellinger distances between densities and the model-separation
//! diagnostic.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::dataset::Domain;
use super::quadrature::Rule;
use super::sem::{Mechanism, SemSpec};
use crate::bayes::{solve_epsilon, LeCamConfig};
use crate::error::{Error, Result};
use crate::graph::{Dag, Edge, VertexSet};

/// Largest dimension handled by tensor-product quadrature.
pub const MAX_QUADRATURE_DIM: usize = 3;

/// A joint density that can be evaluated and sampled.
pub trait Density: Sync {
    fn dim(&self) -> usize;
    fn domain(&self) -> Domain;
    /// Box holding all but a negligible share of the mass.
    fn bounds(&self) -> Vec<(f64, f64)>;
    fn pdf(&self, x: &[f64]) -> f64;
    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64>;
}

/// A conditional density of one vertex given a set of parent vertices.
pub trait ConditionalDensity: Sync {
    fn child(&self) -> usize;
    fn parents(&self) -> VertexSet;
    /// Density at `x` with parent values in increasing vertex order.
    fn pdf(&self, x: f64, parents: &[f64]) -> f64;
}

/// Multivariate normal density.
#[derive(Clone, Debug)]
pub struct Gaussian {
    mean: DVector<f64>,
    chol: DMatrix<f64>,
    log_norm: f64,
    sds: Vec<f64>,
}

impl Gaussian {
    pub fn new(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Gaussian> {
        let d = mean.len();
        if cov.nrows() != d || cov.ncols() != d {
            return Err(Error::Signature("covariance shape does not match mean".into()));
        }
        let sds = (0..d).map(|i| cov[(i, i)].sqrt()).collect();
        let chol = cov
            .cholesky()
            .ok_or_else(|| Error::Config("covariance is not positive definite".into()))?
            .l();
        let log_det: f64 = 2.0 * chol.diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let log_norm = -0.5 * (d as f64 * (2.0 * std::f64::consts::PI).ln() + log_det);
        Ok(Gaussian {
            mean: DVector::from_vec(mean),
            chol,
            log_norm,
            sds,
        })
    }

    pub fn univariate(mean: f64, var: f64) -> Result<Gaussian> {
        Gaussian::new(vec![mean], DMatrix::from_element(1, 1, var))
    }
}

impl Density for Gaussian {
    fn dim(&self) -> usize {
        self.mean.len()
    }

    fn domain(&self) -> Domain {
        Domain::Unbounded
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        self.mean
            .iter()
            .zip(&self.sds)
            .map(|(m, s)| (m - 12.0 * s, m + 12.0 * s))
            .collect()
    }

    fn pdf(&self, x: &[f64]) -> f64 {
        let diff = DVector::from_column_slice(x) - &self.mean;
        let z = self
            .chol
            .solve_lower_triangular(&diff)
            .expect("Cholesky factor is invertible");
        (self.log_norm - 0.5 * z.norm_squared()).exp()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let z = DVector::from_iterator(self.dim(), (0..self.dim()).map(|_| rng.sample::<f64, _>(StandardNormal)));
        (&self.mean + &self.chol * z).iter().copied().collect()
    }
}

/// The joint density of a structural equation model.
impl Density for SemSpec {
    fn dim(&self) -> usize {
        self.n_vertices()
    }

    fn domain(&self) -> Domain {
        SemSpec::domain(self)
    }

    fn bounds(&self) -> Vec<(f64, f64)> {
        self.support_box()
    }

    fn pdf(&self, x: &[f64]) -> f64 {
        self.joint_pdf(x)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut x = vec![0.0; self.n_vertices()];
        for j in self.dag.topological_order() {
            let parents: Vec<f64> = self.dag.parents(j).iter().map(|k| x[k]).collect();
            x[j] = self.nodes[j].sample(&parents, rng);
        }
        x
    }
}

/// A SEM mechanism viewed as a conditional density.
#[derive(Clone, Debug)]
pub struct MechanismDensity {
    pub child: usize,
    pub parents: VertexSet,
    pub mechanism: Mechanism,
}

impl MechanismDensity {
    pub fn of(spec: &SemSpec, j: usize) -> MechanismDensity {
        MechanismDensity {
            child: j,
            parents: spec.dag.parents(j),
            mechanism: spec.nodes[j].clone(),
        }
    }
}

impl ConditionalDensity for MechanismDensity {
    fn child(&self) -> usize {
        self.child
    }

    fn parents(&self) -> VertexSet {
        self.parents
    }

    fn pdf(&self, x: f64, parents: &[f64]) -> f64 {
        self.mechanism.pdf(x, parents)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Tensor Gauss-Legendre grid with about `points` nodes per axis.
    Quadrature { points: usize },
    /// Importance sampling from `(p + q) / 2`.
    MonteCarlo { draws: usize, seed: u64 },
}

/// Hellinger distance `(int (sqrt p - sqrt q)^2)^(1/2)`, between 0 and sqrt 2.
pub fn hellinger(p: &dyn Density, q: &dyn Density, method: Method) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::Signature(format!("dimensions {} and {} differ", p.dim(), q.dim())));
    }
    if p.domain() != q.domain() {
        return Err(Error::Signature("densities live on different domains".into()));
    }
    let squared = match method {
        Method::Quadrature { points } => {
            let dim = p.dim();
            if dim > MAX_QUADRATURE_DIM {
                return Err(Error::Config(format!(
                    "quadrature supports at most {MAX_QUADRATURE_DIM} dimensions, got {dim}"
                )));
            }
            let rules: Vec<Rule> = p
                .bounds()
                .iter()
                .zip(q.bounds())
                .map(|(a, b)| Rule::with_budget(points, a.0.min(b.0), a.1.max(b.1)))
                .collect();
            let mut total = 0.0;
            for_each_node(&rules, |x, w| {
                let diff = p.pdf(x).sqrt() - q.pdf(x).sqrt();
                total += w * diff * diff;
            });
            total
        }
        Method::MonteCarlo { draws, seed } => {
            if draws == 0 {
                return Err(Error::Config("Monte Carlo needs at least one draw".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut total = 0.0;
            for _ in 0..draws {
                let x = if rng.random_bool(0.5) { p.sample(&mut rng) } else { q.sample(&mut rng) };
                let (a, b) = (p.pdf(&x), q.pdf(&x));
                let m = 0.5 * (a + b);
                if m > 0.0 {
                    let diff = a.sqrt() - b.sqrt();
                    total += diff * diff / m;
                }
            }
            total / draws as f64
        }
    };
    Ok(squared.clamp(0.0, 2.0).sqrt())
}

/// Squared integrated Hellinger distance between two conditionals of the same
/// child, with parent configurations weighted by `weight`, a density over the
/// vertices `weight_vars`. Both conditionals are completed to `weight_vars`.
pub fn integrated_hellinger(
    f: &dyn ConditionalDensity,
    g: &dyn ConditionalDensity,
    weight: &dyn Density,
    weight_vars: VertexSet,
    child_range: (f64, f64),
    points: usize,
) -> Result<f64> {
    let child = f.child();
    if g.child() != child {
        return Err(Error::Signature(format!(
            "children {} and {} differ",
            child + 1,
            g.child() + 1
        )));
    }
    if weight_vars.contains(child) {
        return Err(Error::Signature("weight must not include the child".into()));
    }
    if !f.parents().union(g.parents()).is_subset(weight_vars) {
        return Err(Error::Signature("weight does not cover both parent sets".into()));
    }
    if weight.dim() != weight_vars.len() {
        return Err(Error::Signature("weight dimension does not match its variables".into()));
    }
    if weight_vars.len() + 1 > MAX_QUADRATURE_DIM {
        return Err(Error::Config(format!(
            "quadrature supports at most {MAX_QUADRATURE_DIM} dimensions"
        )));
    }
    let vars = weight_vars.to_vec();
    let pick = |set: VertexSet, x: &[f64]| -> Vec<f64> {
        vars.iter().zip(x).filter(|(v, _)| set.contains(**v)).map(|(_, x)| *x).collect()
    };
    let outer: Vec<Rule> = weight.bounds().iter().map(|(lo, hi)| Rule::with_budget(points, *lo, *hi)).collect();
    let inner = Rule::with_budget(points, child_range.0, child_range.1);
    let mut total = 0.0;
    let mut fail = None;
    for_each_node(&outer, |xs, w| {
        let p = weight.pdf(xs);
        if p <= 0.0 || fail.is_some() {
            return;
        }
        let (fx, gx) = (pick(f.parents(), xs), pick(g.parents(), xs));
        let local = inner.integrate(|y| {
            let diff = f.pdf(y, &fx).sqrt() - g.pdf(y, &gx).sqrt();
            diff * diff
        });
        if !local.is_finite() {
            fail = Some(Error::Config("non-finite conditional density".into()));
        }
        total += w * p * local;
    });
    match fail {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// Visit every node of the tensor grid with its product weight.
fn for_each_node(rules: &[Rule], mut visit: impl FnMut(&[f64], f64)) {
    let d = rules.len();
    if d == 0 {
        visit(&[], 1.0);
        return;
    }
    let mut idx = vec![0usize; d];
    let mut x: Vec<f64> = rules.iter().map(|r| r.nodes[0]).collect();
    loop {
        let w: f64 = (0..d).map(|a| rules[a].weights[idx[a]]).product();
        visit(&x, w);
        let mut a = 0;
        loop {
            idx[a] += 1;
            if idx[a] < rules[a].len() {
                x[a] = rules[a].nodes[idx[a]];
                break;
            }
            idx[a] = 0;
            x[a] = rules[a].nodes[0];
            a += 1;
            if a == d {
                return;
            }
        }
    }
}

/// Values of a function on a full tensor grid; axis `a` varies fastest for
/// `a = 0`.
struct Grid {
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl Grid {
    fn stride(&self, axis: usize) -> usize {
        self.shape[..axis].iter().product()
    }

    /// Replace values by their weighted sum along `axis`, broadcast back.
    fn marginalize(&self, axis: usize, weights: &[f64]) -> Grid {
        let stride = self.stride(axis);
        let len = self.shape[axis];
        let mut values = self.values.clone();
        for base in 0..self.values.len() {
            if (base / stride) % len != 0 {
                continue;
            }
            let s: f64 = (0..len).map(|i| weights[i] * self.values[base + i * stride]).sum();
            for i in 0..len {
                values[base + i * stride] = s;
            }
        }
        Grid {
            shape: self.shape.clone(),
            values,
        }
    }
}

/// Plug-in separation `delta` for omitting `k -> j` from `g`: the integrated
/// Hellinger distance between the true conditionals `p(x_j | x_{S + k})` and
/// `p(x_j | x_S)`, `S = pa_g(j)`, weighted by `p(x_{S + k})`. All densities are
/// obtained from the SEM joint by quadrature, so the model needs at most
/// three vertices. Returns the distance, not its square.
pub fn separation_diagnostic(spec: &SemSpec, g: &Dag, (k, j): Edge, points: usize) -> Result<f64> {
    let d = spec.n_vertices();
    if g.n_vertices() != d {
        return Err(Error::VertexCountMismatch(g.n_vertices(), d));
    }
    if k >= d || j >= d || k == j {
        return Err(Error::Config("missing edge must join two distinct vertices".into()));
    }
    if g.has_edge(k, j) {
        return Err(Error::Config(format!("edge {}->{} is present", k + 1, j + 1)));
    }
    g.add_edge(k, j)?;
    if d > MAX_QUADRATURE_DIM {
        return Err(Error::Config(format!(
            "separation diagnostic supports at most {MAX_QUADRATURE_DIM} vertices, got {d}"
        )));
    }
    let rules: Vec<Rule> = spec
        .support_box()
        .iter()
        .map(|(lo, hi)| Rule::with_budget(points, *lo, *hi))
        .collect();
    let shape: Vec<usize> = rules.iter().map(Rule::len).collect();
    let mut values = Vec::with_capacity(shape.iter().product());
    for_each_node(&rules, |x, _| values.push(spec.joint_pdf(x)));
    let joint = Grid { shape, values };

    let s = g.parents(j);
    let u = s.with(k);
    let mut p_ju = joint;
    for a in 0..d {
        if a != j && !u.contains(a) {
            p_ju = p_ju.marginalize(a, &rules[a].weights);
        }
    }
    let p_u = p_ju.marginalize(j, &rules[j].weights);
    let p_js = p_ju.marginalize(k, &rules[k].weights);
    let p_s = p_js.marginalize(j, &rules[j].weights);

    let kept = u.with(j);
    let mut total = 0.0;
    let mut idx = vec![0usize; d];
    for i in 0..p_ju.values.len() {
        let mut rest = i;
        for (a, n) in p_ju.shape.iter().enumerate() {
            idx[a] = rest % n;
            rest /= n;
        }
        if (0..d).any(|a| !kept.contains(a) && idx[a] != 0) {
            continue;
        }
        let (pu, ps) = (p_u.values[i], p_s.values[i]);
        if pu <= 0.0 || ps <= 0.0 {
            continue;
        }
        let w: f64 = kept.iter().map(|a| rules[a].weights[idx[a]]).product();
        let diff = (p_ju.values[i] / pu).sqrt() - (p_js.values[i] / ps).sqrt();
        total += w * pu * diff * diff;
    }
    Ok(total.clamp(0.0, 2.0).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub n: usize,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    /// 1-based `(k, j)`.
    pub edge: (usize, usize),
    pub delta: f64,
    /// `epsilon_n` of `g` with the edge added.
    pub rates: Vec<RatePoint>,
}

/// The diagnostic together with the rates of the larger model over `ns`.
pub fn separation_report(
    spec: &SemSpec,
    g: &Dag,
    edge: Edge,
    ns: &[usize],
    gamma: f64,
    points: usize,
) -> Result<SeparationReport> {
    let delta = separation_diagnostic(spec, g, edge, points)?;
    let larger = g.add_edge(edge.0, edge.1)?;
    let rates = ns
        .iter()
        .map(|&n| {
            let cfg = LeCamConfig::new(gamma, n, g.n_vertices())?;
            Ok(RatePoint {
                n,
                epsilon: solve_epsilon(&cfg, &larger.sparsity())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SeparationReport {
        edge: (edge.0 + 1, edge.1 + 1),
        delta,
        rates,
    })
}
