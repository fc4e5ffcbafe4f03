use proptest::prelude::*;
use varsens_core::bootstrap::{bootstrap, BootstrapOptions, CiMethod};
use varsens_core::gp::{GpModel, Kernel, KernelKind};
use varsens_core::sampling::l2_star_discrepancy;
use varsens_core::shapley::{all_permutations, castro_shapley, exact_shapley, permutation_shapley, TableGame};
use varsens_core::sobol::{build_pick_freeze, estimate_indices, FirstOrderEstimator, PickFreezeLayout};
use varsens_core::testbed::{self, BenchmarkModel};
use varsens_core::{EstimatorOptions, Matrix};

fn opts(first: FirstOrderEstimator) -> EstimatorOptions {
    EstimatorOptions { first, bootstrap: None }
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(0.0f64..1.0, rows * cols).prop_map(move |v| Matrix::from_vec(rows, cols, v).unwrap())
}

/// Outputs of a pick-freeze layout: `n (d + 2)` values with some spread.
fn outputs() -> impl Strategy<Value = (PickFreezeLayout, Vec<f64>)> {
    (4usize..30, 1usize..5).prop_flat_map(|(n, d)| {
        let layout = PickFreezeLayout::independent(n, d);
        prop::collection::vec(-10.0f64..10.0, layout.total_runs()).prop_map(move |y| (layout, y))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jansen_is_affine_invariant((layout, y) in outputs(), a in prop_oneof![-50.0f64..-0.1, 0.1f64..50.0], b in -100.0f64..100.0) {
        let base = estimate_indices(&y, layout, &[], &opts(FirstOrderEstimator::Jansen));
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let moved: Vec<f64> = y.iter().map(|v| a * v + b).collect();
        let t = estimate_indices(&moved, layout, &[], &opts(FirstOrderEstimator::Jansen)).unwrap();
        prop_assert!(close(&t.first_order(), &base.first_order(), 1e-8));
        prop_assert!(close(&t.total_order(), &base.total_order(), 1e-8));
    }

    #[test]
    fn saltelli_is_scale_invariant((layout, y) in outputs(), a in prop_oneof![-50.0f64..-0.1, 0.1f64..50.0]) {
        let base = estimate_indices(&y, layout, &[], &opts(FirstOrderEstimator::Saltelli));
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let scaled: Vec<f64> = y.iter().map(|v| a * v).collect();
        let t = estimate_indices(&scaled, layout, &[], &opts(FirstOrderEstimator::Saltelli)).unwrap();
        prop_assert!(close(&t.first_order(), &base.first_order(), 1e-9));
        prop_assert!(close(&t.total_order(), &base.total_order(), 1e-9));
    }

    #[test]
    fn pick_freeze_blocks((n, d) in (1usize..8, 1usize..6), seed in any::<u64>()) {
        let mut rng = seed;
        let mut next = || { rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (rng >> 11) as f64 / (1u64 << 53) as f64 };
        let a = Matrix::from_vec(n, d, (0..n * d).map(|_| next()).collect()).unwrap();
        let b = Matrix::from_vec(n, d, (0..n * d).map(|_| next()).collect()).unwrap();
        let p = build_pick_freeze(&a, &b).unwrap();
        prop_assert_eq!(p.total_runs(), n * (d + 2));
        prop_assert_eq!(p.block(0), a.clone());
        prop_assert_eq!(p.block(1), b.clone());
        for i in 0..d {
            let h = p.block(2 + i);
            for r in 0..n {
                for j in 0..d {
                    prop_assert_eq!(h[(r, j)], if j == i { b[(r, j)] } else { a[(r, j)] });
                }
            }
        }
    }

    #[test]
    fn shapley_algorithms_agree(d in 1usize..=6, raw in prop::collection::vec(-5.0f64..5.0, 64)) {
        let mut values = raw[..1 << d].to_vec();
        values[0] = 0.0;
        let game = TableGame::new(d, values.clone()).unwrap();
        let exact = exact_shapley(&game).unwrap();
        let perm = permutation_shapley(&game).unwrap();
        let castro = castro_shapley(&game, &all_permutations(d)).unwrap();
        prop_assert!(close(&exact, &perm, 1e-12));
        prop_assert!(close(&exact, &castro, 1e-12));
        let total: f64 = exact.iter().sum();
        prop_assert!((total - values[(1 << d) - 1]).abs() < 1e-12);
    }

    #[test]
    fn linear_gaussian_shapley_from_explained_variance(s1 in 0.1f64..3.0, s2 in 0.1f64..3.0, rho in -0.95f64..0.95) {
        let m = BenchmarkModel::linear_gaussian(s1, s2, rho).unwrap();
        let a = testbed::analytic_indices(&m).unwrap();
        let cov = Matrix::from_rows(&[[s1 * s1, rho * s1 * s2], [rho * s1 * s2, s2 * s2]]).unwrap();
        let nu = |j: &[usize]| testbed::linear_gaussian_nu1(&[1.0, 1.0], &cov, j).unwrap() / a.var_y;
        let game = TableGame::new(2, vec![0.0, nu(&[0]), nu(&[1]), nu(&[0, 1])]).unwrap();
        let phi = exact_shapley(&game).unwrap();
        let closed = a.shapley.unwrap();
        prop_assert!(close(&phi, &closed, 1e-12));
        prop_assert!((closed[0] + closed[1] - 1.0).abs() < 1e-12);
        // each Shapley effect lies between the total and first-order index
        for ((phi_i, t), s) in closed.iter().zip(&a.ti).zip(&a.si) {
            prop_assert!(*phi_i >= t.min(*s) - 1e-12 && *phi_i <= t.max(*s) + 1e-12);
        }
    }

    #[test]
    fn gp_likelihood_ignores_row_order(x in matrix(8, 2), shift in 0usize..8, ls in 0.1f64..2.0) {
        let y: Vec<f64> = x.iter_rows().map(|r| (3.0 * r[0]).sin() + r[1] * r[1]).collect();
        let kernel = Kernel::new(KernelKind::Matern52, 1.3, vec![ls, 0.7 * ls]).unwrap();
        let noise = vec![1e-3; 8];
        let order: Vec<usize> = (0..8).map(|i| (i * 3 + shift) % 8).collect();
        let xp = x.select(&order, &[0, 1]);
        let yp: Vec<f64> = order.iter().map(|&i| y[i]).collect();
        let m1 = GpModel::condition(x, y, kernel.clone(), noise.clone(), 0.0).unwrap();
        let m2 = GpModel::condition(xp, yp, kernel, noise, 0.0).unwrap();
        prop_assert!((m1.log_likelihood() - m2.log_likelihood()).abs() < 1e-8 * (1.0 + m1.log_likelihood().abs()));
        let probe = [0.3, 0.6];
        prop_assert!((m1.predict_mean(&probe) - m2.predict_mean(&probe)).abs() < 1e-8);
    }

    #[test]
    fn gp_mean_is_linear_in_outputs(x in matrix(7, 1), y1 in prop::collection::vec(-3.0f64..3.0, 7), y2 in prop::collection::vec(-3.0f64..3.0, 7), c in -4.0f64..4.0, probe in 0.0f64..1.0) {
        let kernel = Kernel::new(KernelKind::SquaredExponential, 2.0, vec![0.3]).unwrap();
        let noise = vec![0.05; 7];
        let mean = |y: Vec<f64>| GpModel::condition(x.clone(), y, kernel.clone(), noise.clone(), 0.0).unwrap().predict_mean(&[probe]);
        let combo: Vec<f64> = y1.iter().zip(&y2).map(|(a, b)| a + c * b).collect();
        let lhs = mean(combo);
        let rhs = mean(y1) + c * mean(y2);
        prop_assert!((lhs - rhs).abs() < 1e-8 * (1.0 + lhs.abs()));
    }

    #[test]
    fn gp_variance_is_nonnegative(x in matrix(12, 2), ls in 0.01f64..5.0, probes in matrix(20, 2)) {
        let y: Vec<f64> = x.iter_rows().map(|r| r[0] - r[1]).collect();
        let kernel = Kernel::new(KernelKind::SquaredExponential, 1.0, vec![ls, ls]).unwrap();
        let m = GpModel::condition(x, y, kernel, vec![0.0; 12], 0.0).unwrap();
        for p in m.predict_rows(&probes) {
            prop_assert!(p.var >= 0.0 && p.var.is_finite());
        }
    }

    #[test]
    fn bootstrap_intervals_are_ordered(xs in prop::collection::vec(-10.0f64..10.0, 5..60), seed in any::<u64>(), pct in any::<bool>()) {
        let o = BootstrapOptions { replicates: 50, level: 0.9, ci: if pct { CiMethod::Percentile } else { CiMethod::Normal }, seed };
        let s = bootstrap(xs.len(), &o, |idx| vec![idx.iter().map(|&i| xs[i]).sum::<f64>() / idx.len() as f64]).unwrap();
        prop_assert!(s[0].low_ci <= s[0].high_ci);
        prop_assert!(s[0].std_error >= 0.0);
    }

    #[test]
    fn discrepancy_ignores_row_order(x in matrix(10, 3), shift in 1usize..10) {
        let order: Vec<usize> = (0..10).map(|i| (i * 7 + shift) % 10).collect();
        let d1 = l2_star_discrepancy(&x);
        let d2 = l2_star_discrepancy(&x.select(&order, &[0, 1, 2]));
        prop_assert!(d1 >= 0.0);
        prop_assert!((d1 - d2).abs() < 1e-12);
    }
}

#[test]
fn independent_benchmarks_bracket_one() {
    for m in [BenchmarkModel::Polynomial, BenchmarkModel::Ishigami, BenchmarkModel::AdditiveUniform { d: 5 }] {
        let a = testbed::analytic_indices(&m).unwrap();
        assert!(a.si.iter().sum::<f64>() <= 1.0 + 1e-12);
        assert!(a.ti.iter().sum::<f64>() >= 1.0 - 1e-12);
    }
}
