//! Shapley effects.
//!
//! A cooperative game assigns a payoff `ν(J)` to every coalition `J` of the
//! `d` factors; the Shapley value of factor `i` is its marginal contribution
//! `ν(J ∪ {i}) − ν(J)` averaged over all orders in which the coalition can
//! be assembled. For sensitivity analysis the payoff is the normalized
//! expected conditional variance
//!
//! `ν(J) = E[V(Y | X_~J)] / V(Y)`,
//!
//! whose plain Monte Carlo estimate is unbiased. The random-permutation
//! estimator evaluates it along sampled orders with a two-level loop: `N_O`
//! outer draws of `X_~J`, and for each of them `N_I` conditional draws of
//! `X_J`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::input::{default_names, ConditionalGaussian, InputSpec};
use crate::linalg::Matrix;
use crate::model::Model;
use crate::rng::{self, Purpose, Stream};
use crate::stats;

/// Largest player count for subset enumeration.
pub const MAX_EXACT_PLAYERS: usize = 20;
/// Largest player count for permutation enumeration.
pub const MAX_PERMUTATION_PLAYERS: usize = 9;

/// A set of players as a bitmask (player `i` ↔ bit `i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u64) -> Self {
        Coalition(bits)
    }

    pub fn full(d: usize) -> Self {
        if d >= 64 {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << d) - 1)
        }
    }

    pub fn from_members(members: &[usize]) -> Self {
        Coalition(members.iter().fold(0, |acc, &i| acc | (1u64 << i)))
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(&self, i: usize) -> Self {
        Coalition(self.0 | (1u64 << i))
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Players `0..d` not in the coalition.
    pub fn complement(&self, d: usize) -> Self {
        Coalition(!self.0 & Coalition::full(d).0)
    }

    /// Members in ascending order.
    pub fn members(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }
}

/// A cooperative game over `players()` players.
pub trait Game {
    fn players(&self) -> usize;
    fn value(&self, coalition: Coalition) -> f64;
}

/// A game given by a payoff closure.
#[derive(Debug, Clone)]
pub struct GameSpec<F> {
    pub d: usize,
    pub nu: F,
}

impl<F: Fn(Coalition) -> f64> Game for GameSpec<F> {
    fn players(&self) -> usize {
        self.d
    }

    fn value(&self, coalition: Coalition) -> f64 {
        (self.nu)(coalition)
    }
}

/// A game given by its payoff table, indexed by coalition bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct TableGame {
    d: usize,
    values: Vec<f64>,
}

impl TableGame {
    pub fn new(d: usize, values: Vec<f64>) -> Result<Self> {
        if d > MAX_EXACT_PLAYERS {
            return Err(Error::TooLarge { what: "players for a payoff table", limit: MAX_EXACT_PLAYERS, found: d });
        }
        if values.len() != 1 << d {
            return Err(Error::DimensionMismatch { expected: 1 << d, found: values.len() });
        }
        Ok(Self { d, values })
    }

    /// Tabulates any game.
    pub fn from_game<G: Game + ?Sized>(game: &G) -> Result<Self> {
        let d = game.players();
        if d > MAX_EXACT_PLAYERS {
            return Err(Error::TooLarge { what: "players for subset enumeration", limit: MAX_EXACT_PLAYERS, found: d });
        }
        let values = (0..1u64 << d).map(|b| game.value(Coalition(b))).collect();
        Ok(Self { d, values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Game for TableGame {
    fn players(&self) -> usize {
        self.d
    }

    fn value(&self, coalition: Coalition) -> f64 {
        self.values[coalition.0 as usize]
    }
}

fn check_empty_payoff(v: f64) -> Result<()> {
    if v != 0.0 {
        return Err(Error::invalid(alloc::format!("payoff of the empty coalition must be 0, got {v}")));
    }
    Ok(())
}

/// Shapley values by enumeration of all `2^d` coalitions:
/// `φ_i = Σ_{J ∌ i} |J|!(d−|J|−1)!/d! · [ν(J ∪ {i}) − ν(J)]`.
pub fn exact_shapley<G: Game + ?Sized>(game: &G) -> Result<Vec<f64>> {
    let table = TableGame::from_game(game)?;
    let d = table.d;
    check_empty_payoff(table.values[0])?;
    if d == 0 {
        return Ok(Vec::new());
    }
    // w[s] = s!(d−s−1)!/d!
    let mut w = vec![0.0; d];
    w[0] = 1.0 / d as f64;
    for s in 1..d {
        w[s] = w[s - 1] * s as f64 / (d - s) as f64;
    }
    let mut phi = vec![0.0; d];
    for bits in 0..1u64 << d {
        let j = Coalition(bits);
        let base = table.values[bits as usize];
        let weight = w.get(j.len()).copied().unwrap_or(0.0);
        for (i, p) in phi.iter_mut().enumerate() {
            if !j.contains(i) {
                *p += weight * (table.values[j.with(i).0 as usize] - base);
            }
        }
    }
    Ok(phi)
}

/// Shapley values by averaging marginal contributions over all `d!` orders.
pub fn permutation_shapley<G: Game + ?Sized>(game: &G) -> Result<Vec<f64>> {
    let d = game.players();
    if d > MAX_PERMUTATION_PLAYERS {
        return Err(Error::TooLarge {
            what: "players for permutation enumeration",
            limit: MAX_PERMUTATION_PLAYERS,
            found: d,
        });
    }
    let table = TableGame::from_game(game)?;
    check_empty_payoff(table.values[0])?;
    castro_shapley(&table, &all_permutations(d))
}

/// All permutations of `0..d` in Heap's order.
pub fn all_permutations(d: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..d).collect();
    let mut out = vec![p.clone()];
    let mut c = vec![0usize; d];
    let mut i = 1;
    while i < d {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Average marginal contributions over the given orders (each a permutation
/// of `0..d`), evaluating `ν` along each order.
pub fn castro_shapley<G: Game + ?Sized>(game: &G, orders: &[Vec<usize>]) -> Result<Vec<f64>> {
    let d = game.players();
    if orders.is_empty() {
        return Err(Error::invalid("at least one order is required"));
    }
    let mut phi = vec![0.0; d];
    for order in orders {
        check_permutation(order, d)?;
        let mut prefix = Coalition::EMPTY;
        let mut prev = game.value(prefix);
        for &i in order {
            prefix = prefix.with(i);
            let v = game.value(prefix);
            phi[i] += v - prev;
            prev = v;
        }
    }
    let m = orders.len() as f64;
    phi.iter_mut().for_each(|p| *p /= m);
    Ok(phi)
}

fn check_permutation(order: &[usize], d: usize) -> Result<()> {
    let mut seen = Coalition::EMPTY;
    for &i in order {
        if i >= d || seen.contains(i) {
            return Err(Error::invalid("order is not a permutation of the players"));
        }
        seen = seen.with(i);
    }
    if order.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: order.len() });
    }
    Ok(())
}

/// Sample sizes of the random-permutation estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShapleyConfig {
    /// Number of random orders `M`.
    pub m_permutations: usize,
    /// Outer draws of `X_~J` per coalition.
    pub n_outer: usize,
    /// Conditional draws of `X_J` per outer draw; at least 2.
    pub n_inner: usize,
    /// Unconditional draws for the output variance.
    pub n_var: usize,
    pub seed: u64,
}

impl Default for ShapleyConfig {
    fn default() -> Self {
        Self { m_permutations: 10_000, n_outer: 1, n_inner: 3, n_var: 10_000, seed: 1 }
    }
}

impl ShapleyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_permutations == 0 || self.n_outer == 0 {
            return Err(Error::invalid("permutation and outer-loop counts must be at least 1"));
        }
        if self.n_inner < 2 {
            return Err(Error::invalid("the conditional variance needs at least 2 inner draws"));
        }
        if self.n_var < 2 {
            return Err(Error::invalid("the output variance needs at least 2 draws"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShapleyRow {
    pub parameter: String,
    pub phi: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShapleyEstimate {
    pub rows: Vec<ShapleyRow>,
    /// Estimated `V(Y)` used as the common denominator.
    pub total_variance: f64,
}

impl ShapleyEstimate {
    pub fn phi(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.phi).collect()
    }

    pub fn std_errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.std_error).collect()
    }
}

/// Draws from the input law and from conditional laws of coalitions given
/// their complement.
struct ConditionalSampler<'a> {
    spec: &'a InputSpec,
    cache: BTreeMap<u64, ConditionalGaussian>,
}

impl<'a> ConditionalSampler<'a> {
    fn new(spec: &'a InputSpec) -> Self {
        Self { spec, cache: BTreeMap::new() }
    }

    fn base(&self, rng: &mut Stream, x: &mut [f64]) {
        self.spec.sample_point(rng, x);
    }

    /// Redraws `X_J` given the current `X_~J` in `x`.
    fn redraw(&mut self, j: Coalition, x: &mut [f64], rng: &mut Stream) -> Result<()> {
        let d = self.spec.dim();
        match self.spec.dependence() {
            None => {
                for i in j.members() {
                    x[i] = self.spec.marginals()[i].inverse_cdf(rng::uniform_open(rng))?;
                }
            }
            Some(dep) => {
                let cond = match self.cache.entry(j.bits()) {
                    alloc::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(dep.conditional(&j.complement(d).members())?)
                    }
                };
                let z: Vec<f64> = (0..cond.free().len()).map(|_| rng::standard_normal(rng)).collect();
                cond.fill_free(x, &z);
            }
        }
        Ok(())
    }

    /// Appends `n_outer · n_inner` rows: for each outer draw of the full
    /// vector, `n_inner` copies with `X_J` redrawn conditionally.
    fn push_block(
        &mut self,
        j: Coalition,
        n_outer: usize,
        n_inner: usize,
        rng: &mut Stream,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        let d = self.spec.dim();
        let mut base = vec![0.0; d];
        let mut x = vec![0.0; d];
        for _ in 0..n_outer {
            self.base(rng, &mut base);
            for _ in 0..n_inner {
                x.copy_from_slice(&base);
                self.redraw(j, &mut x, rng)?;
                out.extend_from_slice(&x);
            }
        }
        Ok(())
    }
}

/// Mean over outer groups of the unbiased variance within each group of
/// `n_inner` consecutive outputs.
fn mean_inner_variance(y: &[f64], n_inner: usize) -> f64 {
    let groups = y.len() / n_inner;
    y.chunks_exact(n_inner).map(stats::variance).sum::<f64>() / groups as f64
}

fn check_subset(subset: Coalition, d: usize) -> Result<()> {
    if subset.is_empty() || subset.bits() & !Coalition::full(d).bits() != 0 || subset == Coalition::full(d) {
        return Err(Error::invalid("subset must be a proper nonempty subset of the factors"));
    }
    Ok(())
}

/// Two-level Monte Carlo estimate of `E[V(Y | X_~J)] / v_y` for the
/// coalition `J` (zero-based factor indices).
pub fn nu2_estimate<M: Model + ?Sized>(
    model: &M,
    spec: &InputSpec,
    subset: &[usize],
    cfg: &ShapleyConfig,
    v_y: f64,
) -> Result<f64> {
    cfg.validate()?;
    let d = spec.dim();
    if subset.iter().any(|&i| i >= d) {
        return Err(Error::invalid("subset index out of range"));
    }
    let j = Coalition::from_members(subset);
    check_subset(j, d)?;
    if !(v_y > 0.0 && v_y.is_finite()) {
        return Err(Error::invalid("output variance must be positive and finite"));
    }
    let mut sampler = ConditionalSampler::new(spec);
    let mut rng = rng::stream(cfg.seed, Purpose::Shapley, j.bits() | 1 << 63);
    let mut rows = Vec::with_capacity(cfg.n_outer * cfg.n_inner * d);
    sampler.push_block(j, cfg.n_outer, cfg.n_inner, &mut rng, &mut rows)?;
    let y: Vec<f64> = rows.chunks_exact(d).map(|x| model.eval(x)).collect();
    Ok(mean_inner_variance(&y, cfg.n_inner) / v_y)
}

/// All model inputs needed by the random-permutation estimator, laid out so
/// that the evaluations can happen elsewhere (for instance in an external
/// process) before [`ShapleyPlan::aggregate`] is called.
///
/// Row layout: `n_var` unconditional draws, then for each order `m` and
/// prefix length `k = 1..d−1`, `n_outer` groups of `n_inner` rows with the
/// first `k` factors of the order redrawn conditionally.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyPlan {
    cfg: ShapleyConfig,
    names: Vec<String>,
    orders: Vec<Vec<usize>>,
    points: Matrix,
}

impl ShapleyPlan {
    pub fn new(spec: &InputSpec, cfg: &ShapleyConfig) -> Result<Self> {
        cfg.validate()?;
        let d = spec.dim();
        if d > 63 {
            return Err(Error::TooLarge { what: "factors for shapley estimation", limit: 63, found: d });
        }
        let block = cfg.n_outer * cfg.n_inner;
        let total = cfg
            .m_permutations
            .checked_mul(d - 1)
            .and_then(|v| v.checked_mul(block))
            .and_then(|v| v.checked_add(cfg.n_var))
            .ok_or(Error::TooLarge { what: "shapley design rows", limit: usize::MAX, found: usize::MAX })?;
        let mut data = Vec::with_capacity(total * d);
        let mut vrng = rng::stream(cfg.seed, Purpose::ShapleyVariance, 0);
        data.extend_from_slice(spec.sample(cfg.n_var, &mut vrng).as_slice());

        let mut sampler = ConditionalSampler::new(spec);
        let mut orders = Vec::with_capacity(cfg.m_permutations);
        for m in 0..cfg.m_permutations {
            let mut rng = rng::stream(cfg.seed, Purpose::Shapley, m as u64);
            let mut order: Vec<usize> = (0..d).collect();
            rng::shuffle(&mut order, &mut rng);
            let mut prefix = Coalition::EMPTY;
            for &i in &order[..d - 1] {
                prefix = prefix.with(i);
                sampler.push_block(prefix, cfg.n_outer, cfg.n_inner, &mut rng, &mut data)?;
            }
            orders.push(order);
        }
        let points = Matrix::from_vec(total, d, data)?;
        Ok(Self { cfg: *cfg, names: spec.names().to_vec(), orders, points })
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    pub fn config(&self) -> &ShapleyConfig {
        &self.cfg
    }

    /// Turns the outputs at [`Self::points`] into Shapley effects.
    ///
    /// Along each order the coalition costs run from `0` (empty) to the
    /// estimated `V(Y)` (all factors), so the normalized effects sum to one.
    pub fn aggregate(&self, y: &[f64]) -> Result<ShapleyEstimate> {
        if y.len() != self.points.rows() {
            return Err(Error::DimensionMismatch { expected: self.points.rows(), found: y.len() });
        }
        if let Some(k) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(alloc::format!("model output {k} is not finite")));
        }
        let d = self.points.cols();
        let cfg = &self.cfg;
        let (yv, rest) = y.split_at(cfg.n_var);
        let v_y = stats::variance(yv);
        if crate::sobol::is_degenerate(v_y, stats::mean(yv)) {
            return Err(Error::DegenerateVariance);
        }
        let block = cfg.n_outer * cfg.n_inner;
        let per_order = (d - 1) * block;
        let m = self.orders.len();
        let mut contrib = vec![Vec::with_capacity(m); d];
        for (k, order) in self.orders.iter().enumerate() {
            let chunk = &rest[k * per_order..(k + 1) * per_order];
            let mut prev = 0.0;
            for (pos, &i) in order.iter().enumerate() {
                let cost = if pos + 1 < d {
                    mean_inner_variance(&chunk[pos * block..(pos + 1) * block], cfg.n_inner)
                } else {
                    v_y
                };
                contrib[i].push((cost - prev) / v_y);
                prev = cost;
            }
        }
        let names = if self.names.len() == d { self.names.clone() } else { default_names(d) };
        let rows = contrib
            .iter()
            .zip(names)
            .map(|(c, parameter)| ShapleyRow {
                parameter,
                phi: stats::mean(c),
                std_error: stats::std_dev(c) / libm::sqrt(m as f64),
            })
            .collect();
        Ok(ShapleyEstimate { rows, total_variance: v_y })
    }
}

/// Random-permutation Shapley effects of a deterministic model.
pub fn estimate_shapley<M: Model + ?Sized>(
    model: &M,
    spec: &InputSpec,
    cfg: &ShapleyConfig,
) -> Result<ShapleyEstimate> {
    let plan = ShapleyPlan::new(spec, cfg)?;
    let y = model.eval_rows(plan.points());
    plan.aggregate(&y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::GaussianDependence;

    fn glove(c: Coalition) -> f64 {
        if c.contains(2) && (c.contains(0) || c.contains(1)) {
            1.0
        } else {
            0.0
        }
    }

    #[test]
    fn axioms_on_two_players() {
        let sym = GameSpec { d: 2, nu: |c: Coalition| [0.0, 0.5, 0.5, 1.0][c.bits() as usize] };
        assert_eq!(exact_shapley(&sym).unwrap(), [0.5, 0.5]);
        let dummy = GameSpec { d: 2, nu: |c: Coalition| [0.0, 1.0, 0.0, 1.0][c.bits() as usize] };
        assert_eq!(exact_shapley(&dummy).unwrap(), [1.0, 0.0]);
        assert_eq!(permutation_shapley(&dummy).unwrap(), [1.0, 0.0]);
    }

    #[test]
    fn glove_game() {
        let g = GameSpec { d: 3, nu: glove };
        for phi in [exact_shapley(&g).unwrap(), permutation_shapley(&g).unwrap()] {
            assert!((phi[0] - 1.0 / 6.0).abs() < 1e-15);
            assert!((phi[1] - 1.0 / 6.0).abs() < 1e-15);
            assert!((phi[2] - 2.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn guards() {
        let big = GameSpec { d: 21, nu: |_: Coalition| 0.0 };
        assert!(matches!(exact_shapley(&big), Err(Error::TooLarge { .. })));
        let ten = GameSpec { d: 10, nu: |_: Coalition| 0.0 };
        assert!(matches!(permutation_shapley(&ten), Err(Error::TooLarge { .. })));
        let offset = GameSpec { d: 2, nu: |_: Coalition| 1.0 };
        assert!(exact_shapley(&offset).is_err());
        assert!(castro_shapley(&GameSpec { d: 3, nu: glove }, &[vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn heap_enumerates_every_order_once() {
        let mut all = all_permutations(4);
        assert_eq!(all.len(), 24);
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 24);
    }

    #[test]
    fn config_validation() {
        assert!(ShapleyConfig::default().validate().is_ok());
        assert!(ShapleyConfig { n_inner: 1, ..Default::default() }.validate().is_err());
        assert!(ShapleyConfig { m_permutations: 0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn constant_model_has_zero_nu2_and_degenerate_effects() {
        let spec = InputSpec::uniform(2, 0.0, 1.0).unwrap();
        let cfg = ShapleyConfig { n_outer: 50, ..Default::default() };
        assert_eq!(nu2_estimate(&|_: &[f64]| 4.0, &spec, &[0], &cfg, 1.0).unwrap(), 0.0);
        let small = ShapleyConfig { m_permutations: 10, n_var: 100, ..Default::default() };
        assert_eq!(estimate_shapley(&|_: &[f64]| 4.0, &spec, &small).unwrap_err(), Error::DegenerateVariance);
        assert!(nu2_estimate(&|_: &[f64]| 4.0, &spec, &[0, 1], &cfg, 1.0).is_err());
        assert!(nu2_estimate(&|_: &[f64]| 4.0, &spec, &[], &cfg, 1.0).is_err());
    }

    #[test]
    fn effects_sum_to_one() {
        let dep = GaussianDependence::from_correlation(
            vec![0.0; 3],
            &[1.0, 2.0, 0.5],
            &Matrix::from_rows(&[[1.0, 0.3, 0.0], [0.3, 1.0, -0.4], [0.0, -0.4, 1.0]]).unwrap(),
        )
        .unwrap();
        let spec = InputSpec::gaussian(default_names(3), dep).unwrap();
        let cfg = ShapleyConfig { m_permutations: 200, n_var: 500, ..Default::default() };
        let est = estimate_shapley(&|x: &[f64]| x[0] + x[1] * x[2], &spec, &cfg).unwrap();
        assert!((est.phi().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(est.rows[1].parameter, "x2");
    }

    #[test]
    fn plan_is_reproducible() {
        let spec = InputSpec::uniform(3, 0.0, 1.0).unwrap();
        let cfg = ShapleyConfig { m_permutations: 5, n_var: 10, ..Default::default() };
        let a = ShapleyPlan::new(&spec, &cfg).unwrap();
        let b = ShapleyPlan::new(&spec, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.points().rows(), 10 + 5 * 2 * 3);
    }
}
