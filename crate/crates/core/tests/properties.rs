use proptest::prelude::*;

use hugoniot_bayes::dataset::{dedupe, load_dataset, ShockDataset, ShockPoint};
use hugoniot_bayes::hugoniot::{rh_transform, InitialState};
use hugoniot_bayes::regression::{fit_least_squares, posterior_from_data};
use hugoniot_bayes::stats::special::{f_cdf, f_quantile, student_t_cdf, student_t_quantile};

fn line_data() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (5usize..30).prop_flat_map(|n| {
        (
            Just(n),
            1.0f64..6.0,
            0.5f64..2.0,
            prop::collection::vec(-0.2f64..0.2, n),
        )
            .prop_map(|(n, c0, s, noise)| {
                let up: Vec<f64> = (0..n).map(|i| 0.1 + 3.0 * i as f64 / n as f64).collect();
                let us = up.iter().zip(&noise).map(|(x, e)| c0 + s * x + e).collect();
                (up, us)
            })
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn velocity_scaling_is_equivariant((up, us) in line_data(), c in 0.5f64..4.0) {
        let ds = ShockDataset::from_velocities("a", &up, &us).unwrap();
        let up2: Vec<f64> = up.iter().map(|x| c * x).collect();
        let us2: Vec<f64> = us.iter().map(|x| c * x).collect();
        let ds2 = ShockDataset::from_velocities("b", &up2, &us2).unwrap();
        let (f, g) = (fit_least_squares(&ds, 1).unwrap(), fit_least_squares(&ds2, 1).unwrap());
        // intercept scales with velocity, slope is dimensionless
        prop_assert!(close(g.beta_hat[0], c * f.beta_hat[0], 1e-9));
        prop_assert!(close(g.beta_hat[1], f.beta_hat[1], 1e-9));
        prop_assert!(close(g.s2, c * c * f.s2, 1e-8));
        prop_assert!(close(g.r2, f.r2, 1e-9));
        let (p, q) = (posterior_from_data(&ds, 1).unwrap(), posterior_from_data(&ds2, 1).unwrap());
        prop_assert!(close(q.scale.get(0, 0), c * c * p.scale.get(0, 0), 1e-8));
        prop_assert!(close(q.scale.get(1, 1), p.scale.get(1, 1), 1e-8));
        prop_assert_eq!(p.nu, q.nu);
    }

    #[test]
    fn shifting_us_moves_only_the_intercept((up, us) in line_data(), d in -1.0f64..1.0) {
        let ds = ShockDataset::from_velocities("a", &up, &us).unwrap();
        let us2: Vec<f64> = us.iter().map(|x| x + d).collect();
        let ds2 = ShockDataset::from_velocities("b", &up, &us2).unwrap();
        let (f, g) = (fit_least_squares(&ds, 1).unwrap(), fit_least_squares(&ds2, 1).unwrap());
        prop_assert!(close(g.beta_hat[0], f.beta_hat[0] + d, 1e-9));
        prop_assert!(close(g.beta_hat[1], f.beta_hat[1], 1e-9));
        prop_assert!(close(g.sse, f.sse, 1e-7));
    }

    #[test]
    fn t_quantile_symmetric_and_monotone(p in 0.001f64..0.999, nu in 1.0f64..500.0) {
        let q = student_t_quantile(p, nu).unwrap();
        let r = student_t_quantile(1.0 - p, nu).unwrap();
        prop_assert!(close(q, -r, 1e-9));
        let q2 = student_t_quantile((p + 0.0005).min(0.9995), nu).unwrap();
        prop_assert!(q2 >= q);
        prop_assert!(close(student_t_cdf(q, nu), p, 1e-10));
    }

    #[test]
    fn f_quantile_inverts_cdf(p in 0.01f64..0.99, d1 in 1u32..6, d2 in 1.0f64..200.0) {
        let x = f_quantile(p, d1, d2).unwrap();
        prop_assert!(close(f_cdf(x, d1 as f64, d2), p, 1e-9));
    }

    #[test]
    fn csv_round_trip((up, us) in line_data(), rho in 1.0f64..20.0) {
        let pts: Vec<ShockPoint> = up.iter().zip(&us).map(|(&up, &us)| ShockPoint { up, us }).collect();
        let n = pts.len();
        let ds = ShockDataset::new("m", pts, Some(vec![rho; n]), Some((0..n).map(|i| format!("s{i}")).collect())).unwrap();
        let back = load_dataset(ds.to_csv_string().as_bytes(), "m").unwrap();
        prop_assert_eq!(back, ds);
    }

    #[test]
    fn dedupe_is_idempotent((up, us) in line_data(), picks in prop::collection::vec(0usize..1000, 0..6)) {
        let mut up = up;
        let mut us = us;
        for k in picks {
            let i = k % up.len();
            up.push(up[i]);
            us.push(us[i]);
        }
        let ds = ShockDataset::from_velocities("m", &up, &us).unwrap();
        let (once, removed) = dedupe(&ds).unwrap();
        let (twice, again) = dedupe(&once).unwrap();
        prop_assert_eq!(again, 0);
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.len() + removed, ds.len());
    }

    #[test]
    fn hugoniot_grid_permutation_equivariant(
        c0 in 1.0f64..6.0,
        s in 0.8f64..2.0,
        rho0 in 1.0f64..20.0,
        perm in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let grid: Vec<f64> = (0..12).map(|i| 0.2 * i as f64).collect();
        let shuffled: Vec<f64> = perm.iter().map(|&i| grid[i]).collect();
        let init = InitialState::new(rho0, 1e-4, Some(0.0)).unwrap();
        let a = rh_transform(&[c0, s], &grid, &init).unwrap();
        let b = rh_transform(&[c0, s], &shuffled, &init).unwrap();
        for (k, &i) in perm.iter().enumerate() {
            prop_assert_eq!(b.v[k], a.v[i]);
            prop_assert_eq!(b.p[k], a.p[i]);
            prop_assert_eq!(b.e.as_ref().unwrap()[k], a.e.as_ref().unwrap()[i]);
        }
    }
}
