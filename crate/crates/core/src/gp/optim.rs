//! Box-constrained Nelder–Mead minimization.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Initial simplex edge, clipped to the box.
    pub step: f64,
    pub f_tol: f64,
    pub x_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_evals: 1000, step: 0.5, f_tol: 1e-9, x_tol: 1e-6 }
    }
}

/// Minimizes `f` over the box `[lower, upper]`, starting at `x0` (clamped
/// into the box). Non-finite values count as `+∞`. The returned value is
/// never larger than `f(x0)`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &NelderMeadOptions,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let clamp = |x: &mut [f64]| {
        for ((v, lo), hi) in x.iter_mut().zip(lower).zip(upper) {
            *v = v.clamp(*lo, *hi);
        }
    };
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut start = x0.to_vec();
    clamp(&mut start);
    let mut simplex = vec![start.clone()];
    for i in 0..n {
        let mut p = start.clone();
        let step = opts.step.min(upper[i] - lower[i]);
        p[i] = if p[i] + step <= upper[i] { p[i] + step } else { p[i] - step };
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p, &mut evals)).collect();

    let point = |base: &[f64], toward: &[f64], t: f64| -> Vec<f64> {
        base.iter().zip(toward).map(|(b, c)| b + t * (c - b)).collect()
    };

    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&k| simplex[k].clone()).collect();
        values = order.iter().map(|&k| values[k]).collect();

        let (best, worst) = (values[0], values[n]);
        let spread =
            simplex[1..].iter().flat_map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs())).fold(0.0, f64::max);
        if (worst - best).abs() <= opts.f_tol * (1.0 + best.abs()) && spread <= opts.x_tol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for p in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }
        // reflect the worst vertex through the centroid of the others
        let mut xr = point(&centroid, &simplex[n], -1.0);
        clamp(&mut xr);
        let fr = eval(&xr, &mut evals);
        if fr < values[0] {
            let mut xe = point(&centroid, &simplex[n], -2.0);
            clamp(&mut xe);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = point(&centroid, &xr, 0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = point(&centroid, &simplex[n], 0.5);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for k in 1..=n {
            simplex[k] = point(&simplex[0], &simplex[k], 0.5);
            values[k] = eval(&simplex[k], &mut evals);
        }
    }
    let k = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    (simplex.swap_remove(k), values[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions { max_evals: 5000, x_tol: 1e-9, f_tol: 1e-14, ..Default::default() };
        let (x, v) = nelder_mead(f, &[-1.2, 1.0], &[-5.0, -5.0], &[5.0, 5.0], &opts);
        assert!(v < 1e-10, "{v}");
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn active_bound() {
        let (x, _) = nelder_mead(|x: &[f64]| (x[0] + 3.0).powi(2), &[0.5], &[-1.0], &[1.0], &Default::default());
        assert!((x[0] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| if x[0] > 0.2 { f64::NAN } else { x[0] * x[0] };
        let (_, v) = nelder_mead(f, &[0.1], &[-1.0], &[1.0], &Default::default());
        assert!(v <= 0.01);
    }
}
