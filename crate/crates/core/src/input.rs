//! Input-space description: marginals, an optional joint Gaussian law, the
//! inverse-CDF map from the unit cube and Gaussian conditioning.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, Matrix};
use crate::rng::{self, Stream};
use crate::special::normal_quantile;

/// Marginal law of one input factor.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "kind", rename_all = "lowercase")
)]
pub enum Marginal {
    Uniform { a: f64, b: f64 },
    Gaussian { mu: f64, sigma: f64 },
}

impl Marginal {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        let m = Marginal::Uniform { a, b };
        m.validate()?;
        Ok(m)
    }

    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        let m = Marginal::Gaussian { mu, sigma };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Marginal::Uniform { a, b } if a.is_finite() && b.is_finite() && a < b => Ok(()),
            Marginal::Uniform { a, b } => {
                Err(Error::invalid(format!("uniform marginal needs finite a < b, got a={a}, b={b}")))
            }
            Marginal::Gaussian { mu, sigma } if mu.is_finite() && sigma.is_finite() && sigma > 0.0 => Ok(()),
            Marginal::Gaussian { mu, sigma } => Err(Error::invalid(format!(
                "gaussian marginal needs finite mu and sigma > 0, got mu={mu}, sigma={sigma}"
            ))),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Marginal::Uniform { a, b } => 0.5 * (a + b),
            Marginal::Gaussian { mu, .. } => mu,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Marginal::Uniform { a, b } => (b - a) * (b - a) / 12.0,
            Marginal::Gaussian { sigma, .. } => sigma * sigma,
        }
    }

    /// The `u`-quantile. Uniform accepts `u ∈ [0, 1]`; Gaussian needs
    /// `u ∈ (0, 1)`.
    pub fn inverse_cdf(&self, u: f64) -> Result<f64> {
        match *self {
            Marginal::Uniform { a, b } => {
                if !(0.0..=1.0).contains(&u) {
                    return Err(Error::Domain(format!("probability {u} outside [0, 1]")));
                }
                Ok(a + u * (b - a))
            }
            Marginal::Gaussian { mu, sigma } => Ok(mu + sigma * normal_quantile(u)?),
        }
    }
}

/// Free-function form of [`Marginal::inverse_cdf`].
pub fn inverse_cdf(m: &Marginal, u: f64) -> Result<f64> {
    m.inverse_cdf(u)
}

/// Joint Gaussian law `N(mean, cov)` of all factors.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDependence {
    mean: Vec<f64>,
    cov: Matrix,
    lower: Matrix,
}

impl GaussianDependence {
    /// Validates symmetry, a strictly positive diagonal and positive
    /// semidefiniteness (Cholesky with clamped roundoff pivots).
    pub fn new(mean: Vec<f64>, cov: Matrix) -> Result<Self> {
        let d = mean.len();
        if d == 0 {
            return Err(Error::invalid("gaussian dependence needs at least one factor"));
        }
        if cov.rows() != d || cov.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: cov.rows().max(cov.cols()) });
        }
        if mean.iter().chain(cov.as_slice()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("gaussian dependence has non-finite entries"));
        }
        let diag = cov.diagonal();
        if diag.iter().any(|&v| v <= 0.0) {
            return Err(Error::invalid("covariance diagonal must be strictly positive"));
        }
        let scale = diag.iter().copied().fold(0.0, f64::max);
        if cov.max_abs_asymmetry() > 1e-12 * scale {
            return Err(Error::invalid("covariance matrix is not symmetric"));
        }
        Self::from_parts(mean, cov)
    }

    /// Convenience constructor from standard deviations and a correlation
    /// matrix: `cov_ij = σ_i σ_j ρ_ij`.
    pub fn from_correlation(mean: Vec<f64>, sigma: &[f64], corr: &Matrix) -> Result<Self> {
        let d = sigma.len();
        if corr.rows() != d || corr.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: corr.rows() });
        }
        let mut cov = Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                cov[(i, j)] = sigma[i] * sigma[j] * corr[(i, j)];
            }
        }
        Self::new(mean, cov)
    }

    // Skips the diagonal check so that degenerate conditional laws (perfect
    // correlation) can still be represented.
    fn from_parts(mean: Vec<f64>, cov: Matrix) -> Result<Self> {
        let lower = Cholesky::semidefinite(&cov)?.into_lower();
        Ok(Self { mean, cov, lower })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &Matrix {
        &self.cov
    }

    /// Lower-triangular factor `L` with `L Lᵀ = Σ`.
    pub fn cholesky_lower(&self) -> &Matrix {
        &self.lower
    }

    /// `μ + L z`.
    pub fn transform(&self, z: &[f64], out: &mut [f64]) {
        let d = self.dim();
        for i in 0..d {
            let row = self.lower.row(i);
            out[i] = self.mean[i] + crate::linalg::dot(&row[..=i], &z[..=i]);
        }
    }

    /// Precomputes the law of the factors outside `fixed` given the factors
    /// in `fixed`. Indices are zero-based; their order does not matter.
    pub fn conditional(&self, fixed: &[usize]) -> Result<ConditionalGaussian> {
        ConditionalGaussian::new(self, fixed)
    }

    /// Conditional law of the remaining factors (ascending index order) given
    /// `X_fixed = values`.
    pub fn condition(&self, fixed: &[usize], values: &[f64]) -> Result<GaussianDependence> {
        if fixed.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: fixed.len(), found: values.len() });
        }
        let cond = self.conditional(fixed)?;
        // values follow the caller's index order; ConditionalGaussian sorts
        let mut pairs: Vec<(usize, f64)> = fixed.iter().copied().zip(values.iter().copied()).collect();
        pairs.sort_by_key(|p| p.0);
        let sorted_vals: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let mean = cond.mean_given(&sorted_vals);
        GaussianDependence::from_parts(mean, cond.covariance().clone())
    }
}

/// Law of `X_free | X_fixed` for a joint Gaussian: mean
/// `μ_F + G (x_J − μ_J)` with gain `G = Σ_FJ Σ_JJ⁻¹`, covariance
/// `Σ_FF − G Σ_JF`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalGaussian {
    free: Vec<usize>,
    fixed: Vec<usize>,
    mean_free: Vec<f64>,
    mean_fixed: Vec<f64>,
    gain: Matrix,
    cov: Matrix,
    lower: Matrix,
}

impl ConditionalGaussian {
    fn new(dep: &GaussianDependence, fixed: &[usize]) -> Result<Self> {
        let d = dep.dim();
        let mut fixed: Vec<usize> = fixed.to_vec();
        fixed.sort_unstable();
        fixed.dedup();
        if fixed.iter().any(|&j| j >= d) {
            return Err(Error::invalid("conditioning index out of range"));
        }
        let free: Vec<usize> = (0..d).filter(|i| fixed.binary_search(i).is_err()).collect();
        let mean_free: Vec<f64> = free.iter().map(|&i| dep.mean[i]).collect();
        let mean_fixed: Vec<f64> = fixed.iter().map(|&j| dep.mean[j]).collect();
        let s_ff = dep.cov.select(&free, &free);
        if fixed.is_empty() {
            let lower = Cholesky::semidefinite(&s_ff)?.into_lower();
            return Ok(Self {
                gain: Matrix::zeros(free.len(), 0),
                cov: s_ff,
                lower,
                free,
                fixed,
                mean_free,
                mean_fixed,
            });
        }
        let s_jj = dep.cov.select(&fixed, &fixed);
        let s_fj = dep.cov.select(&free, &fixed);
        let chol = Cholesky::new(&s_jj).map_err(|_| Error::Conditioning)?;
        let scale = s_jj.diagonal().into_iter().fold(0.0, f64::max);
        let min_pivot = chol.lower().diagonal().into_iter().fold(f64::INFINITY, f64::min);
        if min_pivot * min_pivot < 1e-12 * scale {
            return Err(Error::Conditioning);
        }
        // G = Σ_FJ Σ_JJ⁻¹, one row per free index
        let mut gain = Matrix::zeros(free.len(), fixed.len());
        for a in 0..free.len() {
            let g = chol.solve(s_fj.row(a));
            gain.row_mut(a).copy_from_slice(&g);
        }
        let mut cov = s_ff;
        for a in 0..free.len() {
            for b in 0..free.len() {
                cov[(a, b)] -= crate::linalg::dot(gain.row(a), s_fj.row(b));
            }
        }
        for a in 0..free.len() {
            for b in 0..a {
                let v = 0.5 * (cov[(a, b)] + cov[(b, a)]);
                cov[(a, b)] = v;
                cov[(b, a)] = v;
            }
            // roundoff can push a vanishing conditional variance below zero
            if cov[(a, a)] < 0.0 {
                cov[(a, a)] = 0.0;
            }
        }
        let lower = Cholesky::semidefinite(&cov)?.into_lower();
        Ok(Self { free, fixed, mean_free, mean_fixed, gain, cov, lower })
    }

    /// Indices of the conditioned-on factors, ascending.
    pub fn fixed(&self) -> &[usize] {
        &self.fixed
    }

    /// Indices of the remaining factors, ascending.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn covariance(&self) -> &Matrix {
        &self.cov
    }

    /// Conditional mean; `x_fixed` follows the ascending order of [`Self::fixed`].
    pub fn mean_given(&self, x_fixed: &[f64]) -> Vec<f64> {
        let dev: Vec<f64> = x_fixed.iter().zip(&self.mean_fixed).map(|(x, m)| x - m).collect();
        self.mean_free.iter().enumerate().map(|(a, m)| m + crate::linalg::dot(self.gain.row(a), &dev)).collect()
    }

    /// Fills the free coordinates of the full vector `x` (whose fixed
    /// coordinates are already set) with `mean + L z`.
    pub fn fill_free(&self, x: &mut [f64], z: &[f64]) {
        let x_fixed: Vec<f64> = self.fixed.iter().map(|&j| x[j]).collect();
        let m = self.mean_given(&x_fixed);
        for (a, &i) in self.free.iter().enumerate() {
            let row = self.lower.row(a);
            x[i] = m[a] + crate::linalg::dot(&row[..=a], &z[..=a]);
        }
    }
}

/// Names, marginals and optional joint Gaussian law of the `d` input factors.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    names: Vec<String>,
    marginals: Vec<Marginal>,
    dependence: Option<GaussianDependence>,
}

impl InputSpec {
    pub fn new(names: Vec<String>, marginals: Vec<Marginal>, dependence: Option<GaussianDependence>) -> Result<Self> {
        let d = marginals.len();
        if d == 0 {
            return Err(Error::invalid("an input spec needs at least one factor"));
        }
        if names.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: names.len() });
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(Error::invalid(format!("duplicate factor name `{n}`")));
            }
        }
        for m in &marginals {
            m.validate()?;
        }
        if let Some(dep) = &dependence {
            if dep.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: dep.dim() });
            }
            for (i, m) in marginals.iter().enumerate() {
                let Marginal::Gaussian { mu, sigma } = *m else {
                    return Err(Error::invalid(format!(
                        "factor `{}`: a joint gaussian law needs gaussian marginals",
                        names[i]
                    )));
                };
                let var = dep.cov[(i, i)];
                let consistent = libm::fabs(mu - dep.mean[i]) <= 1e-9 * (1.0 + libm::fabs(mu))
                    && libm::fabs(sigma * sigma - var) <= 1e-9 * var;
                if !consistent {
                    return Err(Error::invalid(format!(
                        "factor `{}`: marginal disagrees with the joint mean or covariance diagonal",
                        names[i]
                    )));
                }
            }
        }
        Ok(Self { names, marginals, dependence })
    }

    /// Independent factors named `x1..xd`.
    pub fn independent(marginals: Vec<Marginal>) -> Result<Self> {
        let names = default_names(marginals.len());
        Self::new(names, marginals, None)
    }

    /// `d` independent `U(a, b)` factors named `x1..xd`.
    pub fn uniform(d: usize, a: f64, b: f64) -> Result<Self> {
        Self::independent(vec![Marginal::uniform(a, b)?; d])
    }

    /// A joint Gaussian input whose marginals are read off `dep`.
    pub fn gaussian(names: Vec<String>, dep: GaussianDependence) -> Result<Self> {
        let marginals = (0..dep.dim())
            .map(|i| Marginal::gaussian(dep.mean[i], libm::sqrt(dep.cov[(i, i)])))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names, marginals, Some(dep))
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        self.names = names;
        Self::new(self.names, self.marginals, self.dependence)
    }

    pub fn dim(&self) -> usize {
        self.marginals.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn marginals(&self) -> &[Marginal] {
        &self.marginals
    }

    pub fn dependence(&self) -> Option<&GaussianDependence> {
        self.dependence.as_ref()
    }

    pub fn is_independent(&self) -> bool {
        self.dependence.is_none()
    }

    /// Maps one unit-cube point onto the input space.
    pub fn scale_point(&self, u: &[f64], out: &mut [f64]) -> Result<()> {
        let d = self.dim();
        if u.len() != d || out.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: u.len() });
        }
        match &self.dependence {
            None => {
                for ((o, &p), m) in out.iter_mut().zip(u).zip(&self.marginals) {
                    *o = m.inverse_cdf(p)?;
                }
            }
            Some(dep) => {
                let z = u.iter().map(|&p| normal_quantile(p)).collect::<Result<Vec<_>>>()?;
                dep.transform(&z, out);
            }
        }
        Ok(())
    }

    /// Column-wise inverse-CDF scaling of a unit design. Under a joint
    /// Gaussian law the unit coordinates become standard normal scores which
    /// are then mapped through `μ + L z`.
    pub fn scale_design(&self, unit: &Matrix) -> Result<Matrix> {
        let d = self.dim();
        if unit.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: unit.cols() });
        }
        let mut out = Matrix::zeros(unit.rows(), d);
        for i in 0..unit.rows() {
            self.scale_point(unit.row(i), out.row_mut(i))?;
        }
        Ok(out)
    }

    /// Draws one point from the input law.
    pub fn sample_point(&self, rng: &mut Stream, out: &mut [f64]) {
        match &self.dependence {
            None => {
                for (o, m) in out.iter_mut().zip(&self.marginals) {
                    // uniform_open keeps u away from 0 and 1
                    *o = m.inverse_cdf(rng::uniform_open(rng)).unwrap_or(f64::NAN);
                }
            }
            Some(dep) => {
                let z: Vec<f64> = (0..self.dim()).map(|_| rng::standard_normal(rng)).collect();
                dep.transform(&z, out);
            }
        }
    }

    /// Draws `n` i.i.d. points from the input law.
    pub fn sample(&self, n: usize, rng: &mut Stream) -> Matrix {
        let mut out = Matrix::zeros(n, self.dim());
        for i in 0..n {
            self.sample_point(rng, out.row_mut(i));
        }
        out
    }
}

pub(crate) fn default_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).collect()
}

/// Free-function form of [`GaussianDependence::condition`].
pub fn condition_gaussian(dep: &GaussianDependence, fixed: &[usize], values: &[f64]) -> Result<GaussianDependence> {
    dep.condition(fixed, values)
}

/// Free-function form of [`InputSpec::scale_design`].
pub fn scale_design(unit: &Matrix, spec: &InputSpec) -> Result<Matrix> {
    spec.scale_design(unit)
}

#[cfg(feature = "serde")]
mod serde_impl {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct DependenceDoc {
        mean: Vec<f64>,
        cov: Vec<Vec<f64>>,
    }

    impl Serialize for GaussianDependence {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            DependenceDoc { mean: self.mean.clone(), cov: self.cov.iter_rows().map(<[f64]>::to_vec).collect() }
                .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for GaussianDependence {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let doc = DependenceDoc::deserialize(d)?;
            let cov = Matrix::from_rows(&doc.cov).map_err(serde::de::Error::custom)?;
            GaussianDependence::new(doc.mean, cov).map_err(serde::de::Error::custom)
        }
    }

    #[derive(Serialize, Deserialize)]
    struct SpecDoc {
        names: Vec<String>,
        marginals: Vec<Marginal>,
        #[serde(default)]
        dependence: Option<GaussianDependence>,
    }

    impl Serialize for InputSpec {
        fn serialize<S: Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
            SpecDoc {
                names: self.names.clone(),
                marginals: self.marginals.clone(),
                dependence: self.dependence.clone(),
            }
            .serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for InputSpec {
        fn deserialize<D: Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
            let doc = SpecDoc::deserialize(d)?;
            InputSpec::new(doc.names, doc.marginals, doc.dependence).map_err(serde::de::Error::custom)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn bivariate(rho: f64) -> GaussianDependence {
        GaussianDependence::new(vec![0.0, 0.0], Matrix::from_rows(&[[1.0, rho], [rho, 1.0]]).unwrap()).unwrap()
    }

    #[test]
    fn uniform_quantiles() {
        let m = Marginal::uniform(-core::f64::consts::PI, core::f64::consts::PI).unwrap();
        assert_eq!(m.inverse_cdf(0.5).unwrap(), 0.0);
        let u = Marginal::uniform(0.0, 1.0).unwrap();
        assert_eq!(u.inverse_cdf(0.3).unwrap(), 0.3);
        assert!(u.inverse_cdf(1.2).is_err());
    }

    #[test]
    fn gaussian_endpoints_are_domain_errors() {
        let g = Marginal::gaussian(0.0, 1.0).unwrap();
        assert!(matches!(g.inverse_cdf(0.0), Err(Error::Domain(_))));
        assert!(matches!(g.inverse_cdf(1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn marginal_validation() {
        assert!(Marginal::uniform(1.0, 1.0).is_err());
        assert!(Marginal::gaussian(0.0, 0.0).is_err());
        assert!(Marginal::gaussian(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn spec_validation() {
        let u = Marginal::uniform(0.0, 1.0).unwrap();
        let dup = InputSpec::new(vec!["a".to_string(), "a".to_string()], vec![u, u], None);
        assert!(dup.is_err());
        assert!(InputSpec::independent(vec![]).is_err());
        // joint law with a uniform marginal
        let bad = InputSpec::new(default_names(2), vec![u, u], Some(bivariate(0.2)));
        assert!(bad.is_err());
        // marginal inconsistent with the covariance diagonal
        let g = Marginal::gaussian(0.0, 2.0).unwrap();
        let g1 = Marginal::gaussian(0.0, 1.0).unwrap();
        assert!(InputSpec::new(default_names(2), vec![g, g1], Some(bivariate(0.2))).is_err());
        assert!(InputSpec::new(default_names(2), vec![g1, g1], Some(bivariate(0.2))).is_ok());
    }

    #[test]
    fn dependence_validation() {
        let asym = Matrix::from_rows(&[[1.0, 0.5], [0.4, 1.0]]).unwrap();
        assert!(GaussianDependence::new(vec![0.0, 0.0], asym).is_err());
        let indefinite = Matrix::from_rows(&[[1.0, 1.5], [1.5, 1.0]]).unwrap();
        assert!(GaussianDependence::new(vec![0.0, 0.0], indefinite).is_err());
        let zero_diag = Matrix::from_rows(&[[0.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!(GaussianDependence::new(vec![0.0, 0.0], zero_diag).is_err());
        // perfectly correlated is semidefinite and accepted
        assert!(GaussianDependence::new(vec![0.0, 0.0], Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap()).is_ok());
    }

    #[test]
    fn scale_design_examples() {
        let spec = InputSpec::uniform(2, -core::f64::consts::PI, core::f64::consts::PI).unwrap();
        let u = Matrix::from_rows(&[[0.5, 0.5]]).unwrap();
        assert_eq!(spec.scale_design(&u).unwrap().row(0), &[0.0, 0.0]);

        let dep =
            GaussianDependence::new(vec![1.0, 2.0], Matrix::from_rows(&[[2.0, 0.3], [0.3, 0.5]]).unwrap()).unwrap();
        let gspec = InputSpec::gaussian(default_names(2), dep).unwrap();
        assert_eq!(gspec.scale_design(&u).unwrap().row(0), &[1.0, 2.0]);

        let gspec = InputSpec::gaussian(default_names(2), bivariate(0.5)).unwrap();
        let u = Matrix::from_rows(&[[0.8413, 0.5]]).unwrap();
        let x = gspec.scale_design(&u).unwrap();
        // Φ⁻¹(0.8413) = 0.99982 and L = [[1, 0], [0.5, 0.8660]]
        assert!((x[(0, 0)] - 1.0).abs() < 1e-3);
        assert!((x[(0, 1)] - 0.5).abs() < 1e-3);

        assert!(gspec.scale_design(&Matrix::zeros(1, 3)).is_err());
        assert!(gspec.scale_design(&Matrix::zeros(1, 2)).is_err(), "u = 0 has no gaussian quantile");
    }

    #[test]
    fn textbook_bivariate_conditioning() {
        let c = bivariate(0.5).condition(&[0], &[1.0]).unwrap();
        assert!((c.mean()[0] - 0.5).abs() < 1e-15);
        assert!((c.covariance()[(0, 0)] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn diagonal_conditioning_keeps_marginals() {
        let dep = GaussianDependence::new(
            vec![1.0, -1.0, 3.0],
            Matrix::from_rows(&[[2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 0.5]]).unwrap(),
        )
        .unwrap();
        let c = dep.condition(&[1], &[10.0]).unwrap();
        assert_eq!(c.mean(), &[1.0, 3.0]);
        assert_eq!(c.covariance().as_slice(), &[2.0, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn singular_conditioning_block() {
        let dep = GaussianDependence::new(
            vec![0.0; 3],
            Matrix::from_rows(&[[1.0, 1.0, 0.2], [1.0, 1.0, 0.2], [0.2, 0.2, 1.0]]).unwrap(),
        )
        .unwrap();
        assert_eq!(dep.condition(&[0, 1], &[0.0, 0.0]), Err(Error::Conditioning));
    }
}
