use proptest::prelude::*;

use matwalk::cocycle::{cartan_projection, iwasawa_cocycle, multinorm_cocycle, norm_cocycle, to_unimodular, FlagPoint};
use matwalk::group::{big_n, check_mu, moment, GeneratorMeasure, WalkSampler};
use matwalk::linalg::{
    delta, density_points, exterior_square, first_gap, operator_norm, proj_distance, DualProjectivePoint,
    ProjectivePoint, SquareMatrix,
};
use matwalk::martingale::{azuma_bound, azuma_check, DifferenceStream, StreamKind};
use matwalk::stats::{covariance_fit, folded_gaussian_cdf, gaussian_cdf, ks_statistic, Ecdf};

fn matrix(d: usize) -> impl Strategy<Value = SquareMatrix> {
    prop::collection::vec(-3.0f64..3.0, d * d)
        .prop_filter_map("nearly singular", move |data| {
            let g = SquareMatrix::new(d, data).ok()?;
            (g.det().abs() > 0.05).then_some(g)
        })
}

fn direction(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, d).prop_filter("short vector", |v| v.iter().map(|c| c * c).sum::<f64>() > 0.01)
}

/// Matrix in `SL(d)`: flip a row for positive determinant, then rescale.
fn unimodular(d: usize) -> impl Strategy<Value = SquareMatrix> {
    matrix(d).prop_map(|g| {
        let g = if g.det() < 0.0 { SquareMatrix::diag(&[&[-1.0][..], &vec![1.0; g.dim() - 1]].concat()).mul(&g) } else { g };
        let g = g.scale(g.det().powf(-1.0 / g.dim() as f64));
        to_unimodular(&g).unwrap()
    })
}

fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn point(v: &[f64]) -> ProjectivePoint {
    ProjectivePoint::new(v).unwrap()
}

fn dim_and<S: Strategy, F: Fn(usize) -> S>(f: F) -> impl Strategy<Value = (usize, S::Value)> {
    (2usize..=4).prop_flat_map(move |d| (Just(d), f(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn projective_distance_is_a_metric(
        (_, (a, b, c)) in dim_and(|d| (direction(d), direction(d), direction(d)))
    ) {
        let (x, y, z) = (point(&a), point(&b), point(&c));
        let dxy = proj_distance(&x, &y).unwrap();
        prop_assert!(proj_distance(&x, &x).unwrap() < 1e-7);
        prop_assert!((dxy - proj_distance(&y, &x).unwrap()).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&dxy));
        prop_assert!(proj_distance(&x, &z).unwrap() <= dxy + proj_distance(&y, &z).unwrap() + 1e-12);
    }

    #[test]
    fn gap_lemma_inequalities((_, (g, a, b)) in dim_and(|d| (matrix(d), direction(d), direction(d)))) {
        if let Ok((attracting, repelling)) = density_points(&g) {
            let gamma = first_gap(&g).unwrap();
            let norm_g = operator_norm(&g);
            let x = point(&a);
            let y = DualProjectivePoint::new(&b).unwrap();
            let dx = delta(&x, &repelling).unwrap();
            let rx = vec_norm(&g.mul_vec(x.rep())) / norm_g;
            prop_assert!(dx <= rx + 1e-12 && rx <= dx + gamma + 1e-12);
            let dy = delta(&attracting, &y).unwrap();
            let ry = vec_norm(&g.tr_mul_vec(y.rep())) / norm_g;
            prop_assert!(dy <= ry + 1e-12 && ry <= dy + gamma + 1e-12);
            prop_assert!(proj_distance(&x.apply(&g).unwrap(), &attracting).unwrap() * dx <= gamma + 1e-12);
        }
    }

    #[test]
    fn exterior_square_is_multiplicative((_, (g, h)) in dim_and(|d| (matrix(d), matrix(d)))) {
        let lhs = exterior_square(&g.mul(&h)).unwrap();
        let rhs = exterior_square(&g).unwrap().mul(&exterior_square(&h).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-9 * (1.0 + lhs.frobenius_norm()));
        let n = operator_norm(&g);
        prop_assert!(operator_norm(&exterior_square(&g).unwrap()) <= n * n * (1.0 + 1e-12));
    }

    #[test]
    fn operator_norm_bounds((_, (g, v)) in dim_and(|d| (matrix(d), direction(d)))) {
        let n = operator_norm(&g);
        prop_assert!(vec_norm(&g.mul_vec(&v)) <= n * vec_norm(&v) * (1.0 + 1e-12));
        prop_assert!(n <= g.frobenius_norm() * (1.0 + 1e-12));
        prop_assert!((n - operator_norm(&g.transpose())).abs() <= 1e-12 * n);
    }

    #[test]
    fn moments_and_big_n((_, (g, h)) in dim_and(|d| (matrix(d), matrix(d)))) {
        let a = big_n(&g).unwrap();
        prop_assert!(a >= 1.0);
        prop_assert!((a - big_n(&g.inverse().unwrap()).unwrap()).abs() <= 1e-9 * a);
        let mu = GeneratorMeasure::uniform(vec![g, h]).unwrap();
        let m1 = moment(&mu, 1.0).unwrap().value;
        let m2 = moment(&mu, 2.0).unwrap().value;
        prop_assert!(m1 * m1 <= m2 * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn norm_cocycle_identity((_, (g, h, v)) in dim_and(|d| (matrix(d), matrix(d), direction(d)))) {
        let x = point(&v);
        let lhs = norm_cocycle(&g.mul(&h), &x).unwrap();
        let rhs = norm_cocycle(&g, &x.apply(&h).unwrap()).unwrap() + norm_cocycle(&h, &x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9);
        let m = multinorm_cocycle(&[g.clone(), h.clone()], &[x.clone(), x.clone()]).unwrap();
        prop_assert_eq!(m.coords()[0], norm_cocycle(&g, &x).unwrap());
    }

    #[test]
    fn iwasawa_cocycle_identity((d, (g, h)) in dim_and(|d| (unimodular(d), unimodular(d)))) {
        let x = FlagPoint::standard(d);
        let (sh, hx) = matwalk::cocycle::iwasawa_action(&h, &x).unwrap();
        let lhs = iwasawa_cocycle(&to_unimodular(&g.mul(&h)).unwrap(), &x).unwrap();
        let rhs = iwasawa_cocycle(&g, &hx).unwrap();
        for k in 0..d {
            prop_assert!((lhs.coords()[k] - rhs.coords()[k] - sh.coords()[k]).abs() <= 1e-8);
        }
        prop_assert!(lhs.sum().abs() <= 1e-8);
        let e1 = ProjectivePoint::basis(d, 0);
        prop_assert!((sh.coords()[0] - norm_cocycle(&h, &e1).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn cartan_projection_of_inverse((_, g) in dim_and(unimodular)) {
        let k = cartan_projection(&g).unwrap();
        let k_inv = cartan_projection(&to_unimodular(&g.inverse().unwrap()).unwrap()).unwrap();
        for (a, b) in k.coords().iter().zip(k_inv.coords().iter().rev()) {
            prop_assert!((a + b).abs() <= 1e-8);
        }
        prop_assert!(k.coords().windows(2).all(|w| w[0] >= w[1] - 1e-12));
    }

    #[test]
    fn ks_is_invariant_under_affine_reparameterization(
        xs in prop::collection::vec(-5.0f64..5.0, 5..200),
        scale in 0.1f64..10.0,
        shift in -5.0f64..5.0,
    ) {
        let base = ks_statistic(&Ecdf::new(&xs).unwrap(), |t| gaussian_cdf(t, 0.0, 1.0).unwrap());
        let moved: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
        let other = ks_statistic(&Ecdf::new(&moved).unwrap(), |t| gaussian_cdf(t, shift, scale * scale).unwrap());
        prop_assert!((base - other).abs() <= 1e-9);
        prop_assert!((0.0..=1.0).contains(&base));
    }

    #[test]
    fn folded_cdf_is_monotone(var in 0.01f64..10.0, a in -3.0f64..10.0, b in -3.0f64..10.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (f_lo, f_hi) = (folded_gaussian_cdf(lo, var).unwrap(), folded_gaussian_cdf(hi, var).unwrap());
        prop_assert!(f_lo <= f_hi && (0.0..=1.0).contains(&f_lo) && (0.0..=1.0).contains(&f_hi));
    }

    #[test]
    fn covariance_is_positive_semidefinite(samples in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 2..60)) {
        let fit = covariance_fit(&samples).unwrap();
        prop_assert!(fit.eigenvalues.iter().all(|&e| e >= -1e-12));
    }

    #[test]
    fn word_continuation_is_consistent(seed in any::<u64>(), stream in 0u64..1000, n in 0usize..50, m in 0usize..50) {
        let mu = matwalk::limit::free_semigroup_pair();
        let sampler = WalkSampler::new(&mu, seed, stream);
        let mut s = sampler.stream();
        let mut joined = s.word(n).indices;
        joined.extend(s.word(m).indices);
        prop_assert_eq!(joined, sampler.sample_word(n + m).indices);
    }

    #[test]
    fn check_mu_is_an_involution((_, (g, h)) in dim_and(|d| (matrix(d), matrix(d)))) {
        let mu = GeneratorMeasure::new(vec![g, h], vec![0.3, 0.7]).unwrap();
        let back = check_mu(&check_mu(&mu));
        for (a, b) in mu.atoms().iter().zip(back.atoms()) {
            prop_assert!(a.max_abs_diff(b) <= 1e-9 * (1.0 + a.frobenius_norm()));
        }
        prop_assert_eq!(mu.weights(), back.weights());
    }

    #[test]
    fn azuma_bound_is_monotone(n in 1usize..10_000, k in 1usize..100, eps in 0.0f64..2.0, extra in 0.0f64..1.0, a in 0.1f64..5.0) {
        let b = azuma_bound(n, eps, a).unwrap();
        prop_assert!(b <= 1.0);
        prop_assert!(azuma_bound(n + k, eps, a).unwrap() <= b);
        prop_assert!(azuma_bound(n, eps + extra, a).unwrap() <= b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn azuma_report_invariants(seed in any::<u64>(), eps in 0.05f64..1.0) {
        let stream = DifferenceStream::new(StreamKind::IidBounded { bound: 1.0 }, seed).unwrap();
        let schedule = [4, 16, 64];
        let r = azuma_check(&stream, eps, &schedule, 500).unwrap();
        prop_assert_eq!(r.rows.len(), schedule.len());
        for row in &r.rows {
            prop_assert!((0.0..=1.0).contains(&row.frequency));
            prop_assert!(row.ci_halfwidth >= 0.0);
            prop_assert_eq!(row.holds, row.frequency <= row.bound + 3.0 * row.ci_halfwidth);
        }
    }
}
