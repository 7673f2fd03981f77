//! Seeded random instance generators for the five benchmark problem
//! classes, plus a brute-force oracle providing ground truth.
//!
//! Every generator is a pure function of (parameters, seed); instances
//! reproduce byte-for-byte across platforms.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{ConstrainedProblem, ConstraintSpec, Sense};
use crate::rng::{normal, stream, tag};
use crate::statevector::MAX_QUBITS;

/// Price-series length for the mock portfolio data.
pub const PORTFOLIO_HORIZON: usize = 252;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphInstance {
    pub n_vertices: usize,
    /// Undirected edges (i, j) with i < j, sorted.
    pub edges: Vec<(usize, usize)>,
    pub vertex_weights: Vec<f64>,
    /// Aligned with `edges`.
    pub edge_weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioInstance {
    pub n_assets: usize,
    /// Expected per-step returns.
    pub mu: Vec<f64>,
    /// Sample covariance of per-step returns, n x n.
    pub sigma: Vec<Vec<f64>>,
    /// Risk factor.
    pub q: f64,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceData {
    Graph(GraphInstance),
    Portfolio(PortfolioInstance),
}

/// An instance together with its provenance (generator, parameters, seed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub generator: String,
    pub n: usize,
    pub seed: u64,
    /// Realized edge count for graph generators (records the m rounding).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m_edges: Option<usize>,
    pub data: InstanceData,
}

impl Instance {
    pub fn graph(&self) -> Option<&GraphInstance> {
        match &self.data {
            InstanceData::Graph(g) => Some(g),
            InstanceData::Portfolio(_) => None,
        }
    }

    pub fn portfolio(&self) -> Option<&PortfolioInstance> {
        match &self.data {
            InstanceData::Portfolio(p) => Some(p),
            InstanceData::Graph(_) => None,
        }
    }
}

/// The five problem classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemClass {
    MaxClique,
    MinVertexCover,
    MaxBisection,
    GraphPartition,
    Portfolio,
}

impl ProblemClass {
    pub const ALL: [ProblemClass; 5] = [
        ProblemClass::MaxClique,
        ProblemClass::MinVertexCover,
        ProblemClass::MaxBisection,
        ProblemClass::GraphPartition,
        ProblemClass::Portfolio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemClass::MaxClique => "max_clique",
            ProblemClass::MinVertexCover => "min_vertex_cover",
            ProblemClass::MaxBisection => "max_bisection",
            ProblemClass::GraphPartition => "graph_partition",
            ProblemClass::Portfolio => "portfolio",
        }
    }
}

impl std::str::FromStr for ProblemClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_clique" => Ok(ProblemClass::MaxClique),
            "min_vertex_cover" => Ok(ProblemClass::MinVertexCover),
            "max_bisection" => Ok(ProblemClass::MaxBisection),
            "graph_partition" => Ok(ProblemClass::GraphPartition),
            "portfolio" => Ok(ProblemClass::Portfolio),
            other => Err(Error::InvalidParameter(format!(
                "unknown problem class '{other}'"
            ))),
        }
    }
}

/// Encoding of the bisection/partition objective. The cut form counts edges
/// between the two sides; the same-side form counts edges inside the chosen
/// subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GraphObjective {
    #[default]
    Cut,
    SameSide,
}

/// `count` i.i.d. Normal(1, 1e-4) draws; the near-unit weights that make
/// optima unique with overwhelming probability.
pub fn sample_weights(count: usize, seed: u64) -> Vec<f64> {
    sample_weights_with(count, seed, tag::WEIGHTS)
}

fn sample_weights_with(count: usize, seed: u64, stream_tag: u64) -> Vec<f64> {
    let mut rng = stream(seed, stream_tag);
    (0..count).map(|_| normal(&mut rng, 1.0, 1e-4)).collect()
}

/// n(n-1)/4 rounded to the nearest integer, ties to even.
pub(crate) fn gnm_edge_count(n: usize) -> usize {
    let num = n * (n - 1); // always even, so num/4 has remainder 0 or 2
    let q = num / 4;
    if num % 4 == 2 && q % 2 == 1 {
        q + 1
    } else {
        q
    }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Random G(n, m) graph with m = round(n(n-1)/4): half the edges of a
/// complete graph. Vertex weights come from [`sample_weights`].
pub fn gen_gnm(n: usize, seed: u64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "G(n,m) generation needs n >= 2, got {n}"
        )));
    }
    let m = gnm_edge_count(n);
    let mut pairs = all_pairs(n);
    let mut rng = stream(seed, tag::EDGES);
    // partial Fisher-Yates: the first m entries are a uniform sample
    for k in 0..m {
        let pick = k + rng.gen_range(0..pairs.len() - k);
        pairs.swap(k, pick);
    }
    let mut edges: Vec<(usize, usize)> = pairs[..m].to_vec();
    edges.sort_unstable();
    let vertex_weights = sample_weights(n, seed);
    let edge_weights = sample_weights_with(edges.len(), seed, tag::EDGE_WEIGHTS);
    Ok(Instance {
        generator: "gnm".into(),
        n,
        seed,
        m_edges: Some(m),
        data: InstanceData::Graph(GraphInstance {
            n_vertices: n,
            edges,
            vertex_weights,
            edge_weights,
        }),
    })
}

/// Random d-regular graph by the pairing model, rejecting self-loops and
/// multi-edges. Fine at benchmark sizes; dense cases may need many retries.
pub fn gen_regular(n: usize, degree: usize, seed: u64) -> Result<Instance> {
    if degree >= n || n * degree % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "no {degree}-regular graph on {n} vertices"
        )));
    }
    let mut rng = stream(seed, tag::EDGES);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(degree)).collect();
    let m = n * degree / 2;
    'attempt: for _ in 0..10_000 {
        // Fisher-Yates shuffle, then pair consecutive stubs
        for k in (1..stubs.len()).rev() {
            let pick = rng.gen_range(0..=k);
            stubs.swap(k, pick);
        }
        let mut edges = Vec::with_capacity(m);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue 'attempt;
        }
        let vertex_weights = sample_weights(n, seed);
        let edge_weights = sample_weights_with(m, seed, tag::EDGE_WEIGHTS);
        return Ok(Instance {
            generator: "regular".into(),
            n,
            seed,
            m_edges: Some(m),
            data: InstanceData::Graph(GraphInstance {
                n_vertices: n,
                edges,
                vertex_weights,
                edge_weights,
            }),
        });
    }
    Err(Error::InvalidParameter(format!(
        "pairing model failed to realize a simple {degree}-regular graph on {n} vertices"
    )))
}

/// Planted 2-partition graph: two cliques of n/2 vertices, plus each cross
/// pair independently with probability 2/n.
pub fn gen_planted_partition(n: usize, seed: u64) -> Result<Instance> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "planted partition needs even n >= 4, got {n}"
        )));
    }
    let half = n / 2;
    let mut edges = Vec::new();
    for group in [0..half, half..n] {
        let verts: Vec<usize> = group.collect();
        for (a, &i) in verts.iter().enumerate() {
            for &j in &verts[a + 1..] {
                edges.push((i, j));
            }
        }
    }
    let mut rng = stream(seed, tag::EDGES);
    let p_cross = 2.0 / n as f64;
    for i in 0..half {
        for j in half..n {
            if rng.gen::<f64>() < p_cross {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    let m = edges.len();
    let vertex_weights = sample_weights(n, seed);
    let edge_weights = sample_weights_with(m, seed, tag::EDGE_WEIGHTS);
    Ok(Instance {
        generator: "planted_partition".into(),
        n,
        seed,
        m_edges: Some(m),
        data: InstanceData::Graph(GraphInstance {
            n_vertices: n,
            edges,
            vertex_weights,
            edge_weights,
        }),
    })
}

/// Mock stock-market data with q = 0.5 and B = n/2: n correlated
/// random-walk return series over [`PORTFOLIO_HORIZON`] steps; mu is the
/// mean per-step return and sigma the sample covariance.
pub fn gen_portfolio(n: usize, seed: u64) -> Result<Instance> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "portfolio generation needs even n >= 2, got {n}"
        )));
    }
    let mut rng = stream(seed, tag::PORTFOLIO);
    let t_steps = PORTFOLIO_HORIZON;
    // one-factor return model: r_it = drift_i + vol_i (l_i f_t + sqrt(1-l_i^2) z_it)
    let loadings: Vec<f64> = (0..n)
        .map(|_| normal(&mut rng, 0.5, 0.3).clamp(-0.95, 0.95))
        .collect();
    let vols: Vec<f64> = (0..n)
        .map(|_| normal(&mut rng, 0.01, 0.003).abs() + 1e-4)
        .collect();
    let drifts: Vec<f64> = (0..n).map(|_| normal(&mut rng, 5e-4, 3e-4)).collect();
    let mut returns = vec![vec![0.0f64; n]; t_steps];
    for row in returns.iter_mut() {
        let factor = normal(&mut rng, 0.0, 1.0);
        for (i, r) in row.iter_mut().enumerate() {
            let idio = normal(&mut rng, 0.0, 1.0);
            let l = loadings[i];
            *r = drifts[i] + vols[i] * (l * factor + (1.0 - l * l).sqrt() * idio);
        }
    }
    let mu: Vec<f64> = (0..n)
        .map(|i| returns.iter().map(|row| row[i]).sum::<f64>() / t_steps as f64)
        .collect();
    let mut sigma = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in i..n {
            let cov = returns
                .iter()
                .map(|row| (row[i] - mu[i]) * (row[j] - mu[j]))
                .sum::<f64>()
                / (t_steps - 1) as f64;
            sigma[i][j] = cov;
            sigma[j][i] = cov;
        }
    }
    Ok(Instance {
        generator: "portfolio".into(),
        n,
        seed,
        m_edges: None,
        data: InstanceData::Portfolio(PortfolioInstance {
            n_assets: n,
            mu,
            sigma,
            q: 0.5,
            budget: n / 2,
        }),
    })
}

/// Generate the conventional instance for a problem class at size n.
pub fn generate(class: ProblemClass, n: usize, seed: u64) -> Result<Instance> {
    match class {
        ProblemClass::MaxClique | ProblemClass::MinVertexCover => gen_gnm(n, seed),
        ProblemClass::MaxBisection => gen_regular(n, 3, seed),
        ProblemClass::GraphPartition => gen_planted_partition(n, seed),
        ProblemClass::Portfolio => gen_portfolio(n, seed),
    }
}

/// Build the [`ConstrainedProblem`] a class prescribes for an instance.
pub fn to_problem(
    class: ProblemClass,
    instance: &Instance,
    graph_objective: GraphObjective,
) -> Result<ConstrainedProblem> {
    match class {
        ProblemClass::MaxClique => {
            let g = require_graph(class, instance)?;
            // maximize w.x subject to x_i + x_j <= 1 on every non-edge
            let edge_set: std::collections::BTreeSet<(usize, usize)> =
                g.edges.iter().copied().collect();
            let constraints = all_pairs(g.n_vertices)
                .into_iter()
                .filter(|p| !edge_set.contains(p))
                .map(|(i, j)| ConstraintSpec::pair_at_most_one(i, j))
                .collect();
            ConstrainedProblem::new(
                g.n_vertices,
                Sense::Maximize,
                g.vertex_weights.clone(),
                vec![],
                0.0,
                constraints,
                format!("max_clique[n={} seed={}]", instance.n, instance.seed),
            )
        }
        ProblemClass::MinVertexCover => {
            let g = require_graph(class, instance)?;
            // minimize w.x subject to x_i + x_j >= 1 on every edge
            let constraints = g
                .edges
                .iter()
                .map(|&(i, j)| ConstraintSpec::pair_at_least_one(i, j))
                .collect();
            ConstrainedProblem::new(
                g.n_vertices,
                Sense::Minimize,
                g.vertex_weights.clone(),
                vec![],
                0.0,
                constraints,
                format!("min_vertex_cover[n={} seed={}]", instance.n, instance.seed),
            )
        }
        ProblemClass::MaxBisection | ProblemClass::GraphPartition => {
            let g = require_graph(class, instance)?;
            if g.n_vertices % 2 != 0 {
                return Err(Error::InvalidParameter(
                    "bisection/partition need an even vertex count".into(),
                ));
            }
            let sense = if class == ProblemClass::MaxBisection {
                Sense::Maximize
            } else {
                Sense::Minimize
            };
            let n = g.n_vertices;
            let mut linear = vec![0.0; n];
            let mut quad = std::collections::BTreeMap::<(usize, usize), f64>::new();
            for (&(i, j), &w) in g.edges.iter().zip(&g.edge_weights) {
                match graph_objective {
                    // cut weight: sum w (x_i + x_j - 2 x_i x_j)
                    GraphObjective::Cut => {
                        linear[i] += w;
                        linear[j] += w;
                        *quad.entry((i, j)).or_insert(0.0) += -2.0 * w;
                    }
                    // edges inside the chosen subset: sum w x_i x_j
                    GraphObjective::SameSide => {
                        *quad.entry((i, j)).or_insert(0.0) += w;
                    }
                }
            }
            let quadratic = quad.into_iter().map(|((i, j), c)| (i, j, c)).collect();
            let constraints = vec![ConstraintSpec::cardinality_eq((0..n).collect(), n / 2)];
            ConstrainedProblem::new(
                n,
                sense,
                linear,
                quadratic,
                0.0,
                constraints,
                format!("{}[n={} seed={}]", class.name(), instance.n, instance.seed),
            )
        }
        ProblemClass::Portfolio => {
            let p = match &instance.data {
                InstanceData::Portfolio(p) => p,
                InstanceData::Graph(_) => {
                    return Err(Error::InvalidParameter(
                        "portfolio problem needs a portfolio instance".into(),
                    ))
                }
            };
            // minimize q x'Sx - mu.x subject to 1.x = B; diagonal Sigma terms
            // fold into the linear part because x_i^2 = x_i
            let n = p.n_assets;
            let mut linear = vec![0.0; n];
            let mut quadratic = Vec::new();
            for i in 0..n {
                linear[i] = p.q * p.sigma[i][i] - p.mu[i];
                for j in (i + 1)..n {
                    quadratic.push((i, j, p.q * (p.sigma[i][j] + p.sigma[j][i])));
                }
            }
            let constraints = vec![ConstraintSpec::cardinality_eq((0..n).collect(), p.budget)];
            ConstrainedProblem::new(
                n,
                Sense::Minimize,
                linear,
                quadratic,
                0.0,
                constraints,
                format!("portfolio[n={} seed={}]", instance.n, instance.seed),
            )
        }
    }
}

fn require_graph<'a>(class: ProblemClass, instance: &'a Instance) -> Result<&'a GraphInstance> {
    instance.graph().ok_or_else(|| {
        Error::InvalidParameter(format!("{} needs a graph instance", class.name()))
    })
}

/// Ground truth over the feasible set, in the problem's original sense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// Best and worst feasible objective values in the original sense.
    pub f_max: f64,
    pub f_min: f64,
    /// Basis indices attaining the optimum (max under maximize, min under
    /// minimize).
    pub optimal_states: Vec<usize>,
    pub feasible_count: usize,
    pub sense: Sense,
}

impl OracleResult {
    /// Optimal value in canonical minimization sense.
    pub fn canonical_best(&self) -> f64 {
        match self.sense {
            Sense::Minimize => self.f_min,
            Sense::Maximize => -self.f_max,
        }
    }

    /// Worst feasible value in canonical minimization sense.
    pub fn canonical_worst(&self) -> f64 {
        match self.sense {
            Sense::Minimize => self.f_max,
            Sense::Maximize => -self.f_min,
        }
    }
}

/// Exhaustive enumeration of all 2^n basis states.
///
/// States within a relative 1e-9 of the optimum all count as optimal:
/// symmetric encodings (the cut objective is invariant under swapping the
/// two sides) produce mathematical ties that summation order would
/// otherwise break by a last bit.
pub fn brute_force(problem: &ConstrainedProblem) -> Result<OracleResult> {
    if problem.n_vars == 0 || problem.n_vars > MAX_QUBITS {
        return Err(Error::QubitCount(problem.n_vars));
    }
    let dim = 1usize << problem.n_vars;
    let mut best = f64::INFINITY;
    let mut worst = f64::NEG_INFINITY;
    let mut feasible_count = 0usize;
    for s in 0..dim {
        if !problem.feasible_at_index(s) {
            continue;
        }
        feasible_count += 1;
        let value = problem.objective_at_index(s);
        if value > worst {
            worst = value;
        }
        if value < best {
            best = value;
        }
    }
    if feasible_count == 0 {
        return Err(Error::NoFeasibleState);
    }
    let tie_tol = 1e-9 * best.abs().max(1.0);
    let optimal_states: Vec<usize> = (0..dim)
        .filter(|&s| {
            problem.feasible_at_index(s) && problem.objective_at_index(s) <= best + tie_tol
        })
        .collect();
    let (f_min, f_max) = match problem.sense {
        Sense::Minimize => (best, worst),
        Sense::Maximize => (-worst, -best),
    };
    Ok(OracleResult {
        f_max,
        f_min,
        optimal_states,
        feasible_count,
        sense: problem.sense,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnm_edge_counts() {
        assert_eq!(gnm_edge_count(8), 14);
        // 30/4 = 7.5 rounds to 8 under ties-to-even
        assert_eq!(gnm_edge_count(6), 8);
        // 42/4 = 10.5 rounds to 10
        assert_eq!(gnm_edge_count(7), 10);
        assert_eq!(gnm_edge_count(10), 22); // 22.5 -> 22
        assert_eq!(gnm_edge_count(12), 33);
    }

    #[test]
    fn gnm_is_deterministic_and_well_formed() {
        let a = gen_gnm(8, 3).unwrap();
        let b = gen_gnm(8, 3).unwrap();
        assert_eq!(a, b);
        let g = a.graph().unwrap();
        assert_eq!(g.edges.len(), 14);
        assert_eq!(g.vertex_weights.len(), 8);
        assert_eq!(g.edge_weights.len(), 14);
        // no duplicates, no self-loops, i < j
        for w in g.edges.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(g.edges.iter().all(|&(i, j)| i < j && j < 8));
        // different seed gives a different graph
        assert_ne!(g.edges, gen_gnm(8, 4).unwrap().graph().unwrap().edges);
    }

    #[test]
    fn gnm_vertex_weights_use_public_stream() {
        let g = gen_gnm(6, 9).unwrap();
        assert_eq!(g.graph().unwrap().vertex_weights, sample_weights(6, 9));
    }

    #[test]
    fn regular_degrees() {
        let inst = gen_regular(6, 3, 0).unwrap();
        let g = inst.graph().unwrap();
        assert_eq!(g.edges.len(), 9);
        let mut deg = vec![0usize; 6];
        for &(i, j) in &g.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        assert!(deg.iter().all(|&d| d == 3));
    }

    #[test]
    fn regular_k4() {
        let inst = gen_regular(4, 3, 1).unwrap();
        assert_eq!(
            inst.graph().unwrap().edges,
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        );
    }

    #[test]
    fn regular_rejects_odd_total_degree() {
        assert!(gen_regular(5, 3, 0).is_err());
    }

    #[test]
    fn planted_partition_contains_cliques() {
        let inst = gen_planted_partition(6, 7).unwrap();
        let g = inst.graph().unwrap();
        for &(i, j) in &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)] {
            assert!(g.edges.contains(&(i, j)), "missing clique edge ({i},{j})");
        }
        // within-half edges are exactly 2 * C(n/2, 2)
        let within = g
            .edges
            .iter()
            .filter(|&&(i, j)| (i < 3) == (j < 3))
            .count();
        assert_eq!(within, 6);
    }

    #[test]
    fn planted_partition_cross_edge_statistics() {
        // expected cross edges = (n/2)^2 * 2/n = n/2; check the mean over
        // many seeds within 3 sigma of the binomial standard error
        let n = 8usize;
        let trials = 1000;
        let mut total = 0usize;
        for seed in 0..trials {
            let inst = gen_planted_partition(n, seed).unwrap();
            let g = inst.graph().unwrap();
            total += g
                .edges
                .iter()
                .filter(|&&(i, j)| (i < n / 2) != (j < n / 2))
                .count();
        }
        let p = 2.0 / n as f64;
        let pairs = (n / 2) * (n / 2);
        let expect = pairs as f64 * p;
        let sd = (pairs as f64 * p * (1.0 - p) / trials as f64).sqrt();
        let mean = total as f64 / trials as f64;
        assert!(
            (mean - expect).abs() < 3.0 * sd + 1e-9,
            "cross-edge mean {mean} vs expected {expect} (sd {sd})"
        );
    }

    #[test]
    fn portfolio_shape_and_psd() {
        let inst = gen_portfolio(6, 5).unwrap();
        let p = inst.portfolio().unwrap();
        assert_eq!(p.q, 0.5);
        assert_eq!(p.budget, 3);
        assert_eq!(inst, gen_portfolio(6, 5).unwrap());
        // symmetric
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(p.sigma[i][j], p.sigma[j][i]);
            }
        }
        // PSD within 1e-9: all eigenvalues of the symmetric matrix >= -1e-9
        let m = nalgebra::DMatrix::from_fn(6, 6, |i, j| p.sigma[i][j]);
        let eigs = m.symmetric_eigen().eigenvalues;
        assert!(eigs.iter().all(|&e| e >= -1e-9), "eigenvalues {eigs:?}");
    }

    #[test]
    fn sample_weights_properties() {
        let w = sample_weights(1000, 2);
        assert_eq!(w, sample_weights(1000, 2));
        assert!(w.iter().all(|&x| x > 0.9 && x < 1.1));
    }

    #[test]
    fn clique_on_triangle_is_unconstrained() {
        let inst = Instance {
            generator: "manual".into(),
            n: 3,
            seed: 0,
            m_edges: Some(3),
            data: InstanceData::Graph(GraphInstance {
                n_vertices: 3,
                edges: vec![(0, 1), (0, 2), (1, 2)],
                vertex_weights: vec![1.0, 1.0, 1.0],
                edge_weights: vec![1.0, 1.0, 1.0],
            }),
        };
        let p = to_problem(ProblemClass::MaxClique, &inst, GraphObjective::Cut).unwrap();
        assert!(p.constraints.is_empty());
        let oracle = brute_force(&p).unwrap();
        assert_eq!(oracle.feasible_count, 8);
        assert_eq!(oracle.optimal_states, vec![7]); // all three vertices
        assert_eq!(oracle.f_max, 3.0);
    }

    #[test]
    fn vertex_cover_single_edge() {
        let inst = Instance {
            generator: "manual".into(),
            n: 2,
            seed: 0,
            m_edges: Some(1),
            data: InstanceData::Graph(GraphInstance {
                n_vertices: 2,
                edges: vec![(0, 1)],
                vertex_weights: vec![2.0, 1.0],
                edge_weights: vec![1.0],
            }),
        };
        let p = to_problem(ProblemClass::MinVertexCover, &inst, GraphObjective::Cut).unwrap();
        let oracle = brute_force(&p).unwrap();
        assert_eq!(oracle.feasible_count, 3); // {01, 10, 11}
        assert_eq!(oracle.optimal_states, vec![2]); // lighter endpoint: vertex 1
        assert_eq!(oracle.f_min, 1.0);
        assert_eq!(oracle.f_max, 3.0);
    }

    #[test]
    fn bisection_on_unit_cycle() {
        // 4-cycle with unit weights: the alternating partition cuts all 4 edges
        let inst = Instance {
            generator: "manual".into(),
            n: 4,
            seed: 0,
            m_edges: Some(4),
            data: InstanceData::Graph(GraphInstance {
                n_vertices: 4,
                edges: vec![(0, 1), (0, 3), (1, 2), (2, 3)],
                vertex_weights: vec![1.0; 4],
                edge_weights: vec![1.0; 4],
            }),
        };
        let p = to_problem(ProblemClass::MaxBisection, &inst, GraphObjective::Cut).unwrap();
        let oracle = brute_force(&p).unwrap();
        assert_eq!(oracle.feasible_count, 6);
        assert_eq!(oracle.f_max, 4.0);
        // brute-force cross-check of the optimum value over all 16 states
        let mut best = f64::NEG_INFINITY;
        for s in 0..16usize {
            if (s as u32).count_ones() != 2 {
                continue;
            }
            let cut = [(0, 1), (0, 3), (1, 2), (2, 3)]
                .iter()
                .filter(|&&(i, j)| ((s >> i) & 1) != ((s >> j) & 1))
                .count() as f64;
            best = best.max(cut);
        }
        assert_eq!(oracle.f_max, best);
        // alternating partitions {0,2} and {1,3} are the optima
        assert_eq!(oracle.optimal_states, vec![0b0101, 0b1010]);
    }

    #[test]
    fn same_side_objective_flag() {
        let inst = gen_planted_partition(6, 1).unwrap();
        let p_cut = to_problem(ProblemClass::GraphPartition, &inst, GraphObjective::Cut).unwrap();
        let p_side =
            to_problem(ProblemClass::GraphPartition, &inst, GraphObjective::SameSide).unwrap();
        // same-side form has no linear part; cut form does
        assert!(p_side.linear.iter().all(|&c| c == 0.0));
        assert!(p_cut.linear.iter().any(|&c| c != 0.0));
    }

    #[test]
    fn partition_feasible_count_is_binomial() {
        for n in [4usize, 6, 8] {
            let inst = gen_planted_partition(n, 0).unwrap();
            let p = to_problem(ProblemClass::GraphPartition, &inst, GraphObjective::Cut).unwrap();
            let oracle = brute_force(&p).unwrap();
            let choose = |n: usize, k: usize| -> usize {
                let mut r = 1usize;
                for i in 0..k {
                    r = r * (n - i) / (i + 1);
                }
                r
            };
            assert_eq!(oracle.feasible_count, choose(n, n / 2));
        }
    }

    #[test]
    fn brute_force_unconstrained_sum() {
        let p = ConstrainedProblem::new(
            3,
            Sense::Minimize,
            vec![1.0, 1.0, 1.0],
            vec![],
            0.0,
            vec![],
            "sum",
        )
        .unwrap();
        let oracle = brute_force(&p).unwrap();
        assert_eq!(oracle.f_min, 0.0);
        assert_eq!(oracle.f_max, 3.0);
        assert_eq!(oracle.optimal_states, vec![0]);
        assert_eq!(oracle.feasible_count, 8);
    }

    #[test]
    fn brute_force_two_feasible_states() {
        let p = ConstrainedProblem::new(
            2,
            Sense::Minimize,
            vec![1.0, 0.0],
            vec![],
            0.0,
            vec![ConstraintSpec::cardinality_eq(vec![0, 1], 1)],
            "pick-one",
        )
        .unwrap();
        let oracle = brute_force(&p).unwrap();
        assert_eq!(oracle.feasible_count, 2);
        assert_eq!(oracle.f_min, 0.0); // state 10 (x1 set)
        assert_eq!(oracle.f_max, 1.0);
        assert_eq!(oracle.optimal_states, vec![0b10]);
    }

    #[test]
    fn brute_force_infeasible_errors() {
        let p = ConstrainedProblem::new(
            2,
            Sense::Minimize,
            vec![0.0, 0.0],
            vec![],
            0.0,
            vec![
                ConstraintSpec::pair_at_most_one(0, 1),
                ConstraintSpec::cardinality_eq(vec![0, 1], 2),
            ],
            "contradiction",
        )
        .unwrap();
        assert!(matches!(brute_force(&p), Err(Error::NoFeasibleState)));
    }

    #[test]
    fn generated_optima_are_feasible() {
        for class in ProblemClass::ALL {
            let inst = generate(class, 6, 0).unwrap();
            let p = to_problem(class, &inst, GraphObjective::Cut).unwrap();
            let oracle = brute_force(&p).unwrap();
            for &s in &oracle.optimal_states {
                assert!(p.feasible_at_index(s));
            }
            assert!(oracle.f_min <= oracle.f_max);
        }
    }

    #[test]
    fn unique_optimum_statistics() {
        // near-unit weights should make the optimum unique almost always.
        // The cut objective is invariant under swapping the two sides, so for
        // bisection/partition the unique partition appears as exactly one
        // complementary pair of bitstrings.
        let mut unique = 0usize;
        let mut total = 0usize;
        for class in ProblemClass::ALL {
            let paired = matches!(
                class,
                ProblemClass::MaxBisection | ProblemClass::GraphPartition
            );
            for seed in 0..25u64 {
                let inst = generate(class, 6, seed).unwrap();
                let p = to_problem(class, &inst, GraphObjective::Cut).unwrap();
                let oracle = brute_force(&p).unwrap();
                total += 1;
                let is_unique = if paired {
                    oracle.optimal_states.len() == 2
                        && oracle.optimal_states[0] ^ oracle.optimal_states[1] == (1 << 6) - 1
                } else {
                    oracle.optimal_states.len() == 1
                };
                if is_unique {
                    unique += 1;
                }
            }
        }
        assert!(
            unique * 100 >= total * 99,
            "unique optima in only {unique}/{total} trials"
        );
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = generate(ProblemClass::Portfolio, 6, 123).unwrap();
        let json = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&json).unwrap();
        assert_eq!(inst, back);
    }
}
