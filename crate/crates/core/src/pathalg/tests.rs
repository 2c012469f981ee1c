use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;
use crate::series::k_direct;
use crate::spectral::{classify, DEFAULT_TOLERANCE};

const PHI: f64 = 1.618_033_988_749_895;

fn lee_yang() -> FusionData {
    FusionData::from_labels(&["id", "rho"], "id", vec![vec![0, 1], vec![1, 1]]).unwrap()
}

fn a4() -> FusionData {
    FusionData::from_labels(&["iota", "alpha"], "iota", vec![vec![1, 1], vec![1, 0]]).unwrap()
}

fn inner(d: i64) -> FusionData {
    FusionData::from_labels(&["id"], "id", vec![vec![d]]).unwrap()
}

fn s3() -> FusionData {
    FusionData::from_labels(
        &["triv", "sgn", "std"],
        "triv",
        vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 1]],
    )
    .unwrap()
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_path(model: &PathModel, rng: &mut StdRng, len: usize, target: usize) -> Option<Path> {
    let paths = model.enumerate_paths(len, target).ok()?;
    (!paths.is_empty()).then(|| paths[rng.gen_range(0..paths.len())].clone())
}

/// A random element whose terms all have ket length `m` and bra length `n`.
fn random_homogeneous(model: &PathModel, rng: &mut StdRng, m: usize, n: usize, terms: usize) -> AlgebraElement {
    let s = model.data().size();
    let mut x = model.zero();
    for _ in 0..terms {
        let target = rng.gen_range(0..s);
        let (Some(p), Some(q)) = (random_path(model, rng, m, target), random_path(model, rng, n, target)) else {
            continue;
        };
        let coeff = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        x = x.add(&model.pair(p, q, coeff).unwrap()).unwrap();
    }
    x
}

fn random_element(model: &PathModel, rng: &mut StdRng) -> AlgebraElement {
    let mut x = model.zero();
    for _ in 0..rng.gen_range(1..4) {
        let (m, n) = (rng.gen_range(0..4), rng.gen_range(0..4));
        x = x.add(&random_homogeneous(model, rng, m, n, 2)).unwrap();
    }
    x
}

#[test]
fn enumerate_examples() {
    let ly = PathModel::new(&lee_yang()).unwrap();
    assert_eq!(ly.enumerate_paths(4, 0).unwrap().len(), 2);
    let empty = ly.enumerate_paths(0, 0).unwrap();
    assert_eq!(empty, vec![Path::empty(0)]);
    assert!(ly.enumerate_paths(0, 1).unwrap().is_empty());
    let m = PathModel::new(&inner(3)).unwrap();
    let words = m.enumerate_paths(2, 0).unwrap();
    assert_eq!(words.len(), 9);
    let mut sorted = words.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted, words);
}

#[test]
fn enumeration_counts_match_matrix_powers() {
    for data in [lee_yang(), a4(), s3(), inner(2)] {
        let model = PathModel::new(&data).unwrap();
        let n_mat = data.int_matrix();
        for n in 0..=8 {
            let p = n_mat.pow(n);
            for j in 0..data.size() {
                let paths = model.enumerate_paths(n, j).unwrap();
                assert_eq!(BigInt::from(paths.len()), *p.get(j, data.iota));
                assert!(paths.windows(2).all(|w| w[0] < w[1]));
                assert!(paths.iter().all(|p| p.target() == j && model.check_path(p).is_ok()));
            }
        }
    }
}

#[test]
fn resource_caps() {
    let model = PathModel::new(&inner(5)).unwrap().with_limits(16, 100);
    assert!(matches!(model.enumerate_paths(3, 0), Err(Error::ResourceCap(_))));
    assert!(model.enumerate_paths(2, 0).is_ok());
    let model = PathModel::new(&lee_yang()).unwrap();
    assert!(matches!(model.enumerate_paths(17, 0), Err(Error::ResourceCap(_))));
}

#[test]
fn first_return_examples() {
    let m = PathModel::new(&a4()).unwrap();
    assert_eq!(m.first_return_basis(1).unwrap().len(), 1);
    assert_eq!(m.first_return_basis(2).unwrap().len(), 1);
    for n in 3..8 {
        assert!(m.first_return_basis(n).unwrap().is_empty());
    }
    let m = PathModel::new(&lee_yang()).unwrap();
    let five = m.first_return_basis(5).unwrap();
    assert_eq!(five.len(), 1);
    assert_eq!(five[0], m.path(&[(1, 0), (1, 0), (1, 0), (1, 0), (0, 0)]).unwrap());
    let m = PathModel::new(&inner(4)).unwrap();
    assert_eq!(m.first_return_basis(1).unwrap().len(), 4);
    assert!(m.first_return_basis(2).unwrap().is_empty());
    assert!(matches!(m.first_return_basis(0), Err(Error::ZeroLength(0))));
}

#[test]
fn first_return_counts_match_k_direct() {
    for data in [lee_yang(), a4(), s3(), inner(3)] {
        let m = PathModel::new(&data).unwrap();
        let basis = m.skeleton_basis(10).unwrap();
        for n in 1..=10 {
            assert_eq!(BigInt::from(basis.at(n).len()), k_direct(&data, n).unwrap());
            for l in basis.at(n) {
                assert!(l.interior().all(|s| s != data.iota));
            }
        }
    }
}

#[test]
fn multiply_examples_inner_two() {
    let m = PathModel::new(&inner(2)).unwrap();
    let v1 = m.path(&[(0, 0)]).unwrap();
    let v2 = m.path(&[(0, 1)]).unwrap();
    let e = Path::empty(0);
    let v1_star = m.pair(e.clone(), v1.clone(), c(1.0)).unwrap();
    let v2_op = m.pair(v2.clone(), e.clone(), c(1.0)).unwrap();
    assert!(multiply(&v1_star, &v2_op).unwrap().is_zero());

    let v1v2 = v1.concat(&Path::from_steps(0, v2.steps().to_vec()).unwrap());
    let word = m.pair(v1v2, e.clone(), c(1.0)).unwrap();
    let got = multiply(&v1_star, &word).unwrap();
    assert_eq!(got, m.pair(v2.clone(), e.clone(), c(1.0)).unwrap());

    let p = m.pair(v1.clone(), e.clone(), c(1.0)).unwrap();
    let p_star = m.pair(e, v1.clone(), c(1.0)).unwrap();
    assert_eq!(multiply(&p, &p_star).unwrap(), m.pair(v1.clone(), v1, c(1.0)).unwrap());
}

#[test]
fn mismatched_graphs_rejected() {
    let a = PathModel::new(&inner(2)).unwrap();
    let b = PathModel::new(&inner(3)).unwrap();
    let x = a.identity::<Complex64>();
    let y = b.identity::<Complex64>();
    assert!(matches!(multiply(&x, &y), Err(Error::MismatchedModel)));
    assert!(matches!(a.embed(&y), Err(Error::MismatchedModel)));
}

#[test]
fn star_examples() {
    let m = PathModel::new(&lee_yang()).unwrap();
    let p = m.path(&[(1, 0), (1, 0)]).unwrap();
    let q = m.path(&[(1, 0)]).unwrap();
    let x = m.pair(p.clone(), q.clone(), Complex64::new(1.0, 2.0)).unwrap();
    assert_eq!(star(&x), m.pair(q, p, Complex64::new(1.0, -2.0)).unwrap());
    assert_eq!(star(&star(&x)), x);

    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..30 {
        let x = random_element(&m, &mut rng);
        let y = random_element(&m, &mut rng);
        let lhs = star(&multiply(&x, &y).unwrap());
        let rhs = multiply(&star(&y), &star(&x)).unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_magnitude() < 1e-12);
    }
}

#[test]
fn embed_examples() {
    let m = PathModel::new(&lee_yang()).unwrap();
    let e_rho = m.path(&[(1, 0)]).unwrap();
    let up = m.embed(&m.identity::<Complex64>()).unwrap();
    assert_eq!(up, m.pair(e_rho.clone(), e_rho, c(1.0)).unwrap());

    let m = PathModel::new(&inner(3)).unwrap();
    let up = m.embed(&m.identity::<Complex64>()).unwrap();
    assert_eq!(up.len(), 3);
    for slot in 0..3 {
        let v = m.path(&[(0, slot)]).unwrap();
        assert_eq!(up.coefficient(&PathPair::new(v.clone(), v).unwrap()), c(1.0));
    }
    let twice = m.embed(&up).unwrap();
    assert_eq!(twice.len(), 9);
    assert!(twice.terms().all(|(p, _)| p.ket() == p.bra() && p.ket().len() == 2));
}

#[test]
fn embed_is_multiplicative_and_state_preserving() {
    let mut rng = StdRng::seed_from_u64(11);
    for data in [lee_yang(), a4(), s3()] {
        let m = PathModel::new(&data).unwrap();
        let prof = classify(&data, DEFAULT_TOLERANCE).unwrap();
        for _ in 0..20 {
            let x = random_element(&m, &mut rng);
            let y = random_element(&m, &mut rng);
            let lhs = m.embed(&multiply(&x, &y).unwrap()).unwrap();
            let rhs = multiply(&m.embed(&x).unwrap(), &m.embed(&y).unwrap()).unwrap();
            assert!(lhs.sub(&rhs).unwrap().max_magnitude() < 1e-12);
            let a = phi_state(&x, &prof.dims, prof.d_rho);
            let b = phi_state(&m.embed(&x).unwrap(), &prof.dims, prof.d_rho);
            assert!((a - b).norm() < 1e-9);
        }
    }
}

#[test]
fn multiply_is_associative() {
    let mut rng = StdRng::seed_from_u64(3);
    let m = PathModel::new(&s3()).unwrap();
    for _ in 0..20 {
        let (x, y, z) = (random_element(&m, &mut rng), random_element(&m, &mut rng), random_element(&m, &mut rng));
        let l = multiply(&multiply(&x, &y).unwrap(), &z).unwrap();
        let r = multiply(&x, &multiply(&y, &z).unwrap()).unwrap();
        assert!(l.sub(&r).unwrap().max_magnitude() < 1e-12);
    }
}

#[test]
fn phi_examples() {
    let data = inner(4);
    let m = PathModel::new(&data).unwrap();
    let prof = classify(&data, DEFAULT_TOLERANCE).unwrap();
    let v = m.path(&[(0, 2)]).unwrap();
    let x = m.pair(v.clone(), v, c(1.0)).unwrap();
    assert!((phi_state(&x, &prof.dims, prof.d_rho) - c(0.25)).norm() < 1e-15);

    let data = lee_yang();
    let m = PathModel::new(&data).unwrap();
    let prof = classify(&data, DEFAULT_TOLERANCE).unwrap();
    let l = &m.first_return_basis(2).unwrap()[0];
    let x = m.pair(l.clone(), l.clone(), c(1.0)).unwrap();
    assert!((phi_state(&x, &prof.dims, prof.d_rho).re - 0.381966).abs() < 1e-6);

    let paths = m.enumerate_paths(4, 0).unwrap();
    let off = m.pair(paths[0].clone(), paths[1].clone(), c(1.0)).unwrap();
    assert_eq!(phi_state(&off, &prof.dims, prof.d_rho), c(0.0));
    assert_eq!(phi_state(&m.identity(), &prof.dims, prof.d_rho), c(1.0));
}

#[test]
fn phi_is_positive_and_hermitian() {
    let mut rng = StdRng::seed_from_u64(5);
    for data in [lee_yang(), s3(), a4()] {
        let m = PathModel::new(&data).unwrap();
        let prof = classify(&data, DEFAULT_TOLERANCE).unwrap();
        for _ in 0..30 {
            let x = random_element(&m, &mut rng);
            let xx = multiply(&star(&x), &x).unwrap();
            let v = phi_state(&xx, &prof.dims, prof.d_rho);
            assert!(v.re >= -1e-12 && v.im.abs() < 1e-12);
            let a = phi_state(&star(&x), &prof.dims, prof.d_rho);
            let b = phi_state(&x, &prof.dims, prof.d_rho).conj();
            assert!((a - b).norm() < 1e-12);
            let g = gauge_action(&x, 0.7);
            assert!((phi_state(&g, &prof.dims, prof.d_rho) - phi_state(&x, &prof.dims, prof.d_rho)).norm() < 1e-12);
        }
    }
}

#[test]
fn support_expectation_examples() {
    let data = a4();
    let m = PathModel::new(&data).unwrap();
    let prof = classify(&data, DEFAULT_TOLERANCE).unwrap();
    let total = support_expectation(&m, &prof, 1).unwrap() + support_expectation(&m, &prof, 2).unwrap();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(support_expectation(&m, &prof, 3).unwrap(), 0.0);

    let data = lee_yang();
    let m = PathModel::new(&data).unwrap();
    let prof = classify(&data, DEFAULT_TOLERANCE).unwrap();
    assert!((support_expectation(&m, &prof, 2).unwrap() - PHI.powi(-2)).abs() < 1e-12);
    for n in 1..=10 {
        let k = k_direct(&data, n).unwrap();
        let want = f64::from(u32::try_from(k).unwrap()) / prof.d_rho.powi(n as i32);
        assert!((support_expectation(&m, &prof, n).unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn skeleton_factors_multiply_back() {
    let m = PathModel::new(&s3()).unwrap();
    for l in m.enumerate_paths(7, 0).unwrap() {
        let factors = l.first_return_factors().unwrap();
        let mut prod = m.identity::<Complex64>();
        for f in &factors {
            assert!(f.interior().all(|s| s != 0));
            prod = multiply(&prod, &m.pair(f.clone(), Path::empty(0), c(1.0)).unwrap()).unwrap();
        }
        assert_eq!(prod, m.pair(l, Path::empty(0), c(1.0)).unwrap());
    }
}

#[test]
fn orthogonality_of_skeleton_layers() {
    for data in [lee_yang(), s3(), a4(), inner(3)] {
        let m = PathModel::new(&data).unwrap();
        let basis = m.skeleton_basis(8).unwrap();
        let e = Path::empty(data.iota);
        for n1 in 1..=8 {
            for n2 in (1..=8).filter(|&n| n != n1) {
                for l1 in basis.at(n1) {
                    for l2 in basis.at(n2) {
                        let x = m.pair(l1.clone(), e.clone(), c(1.0)).unwrap();
                        let y = m.pair(l2.clone(), e.clone(), c(1.0)).unwrap();
                        assert!(multiply(&star(&x), &y).unwrap().is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn inner_case_is_cuntz_exactly() {
    for d in [2, 3, 5] {
        let m = PathModel::new(&inner(d)).unwrap();
        let one = BigRational::from_integer(1.into());
        let e = Path::empty(0);
        let v: Vec<AlgebraElement<BigRational>> = (0..d as u32)
            .map(|i| m.pair(m.path(&[(0, i)]).unwrap(), e.clone(), one.clone()).unwrap())
            .collect();
        let mut sum = m.zero();
        for (i, vi) in v.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                let p = multiply(&star(vi), vj).unwrap();
                if i == j {
                    assert_eq!(p, m.identity());
                } else {
                    assert!(p.is_zero());
                }
            }
            sum = sum.add(&multiply(vi, &star(vi)).unwrap()).unwrap();
        }
        let dims = vec![one.clone()];
        let dr = BigRational::from_integer(d.into());
        assert_eq!(phi_state_exact(&sum, &dims, &dr), one);
        assert!(m.equivalent(&sum, &m.identity(), 0.0).unwrap());
    }
}

#[test]
fn expansion_examples() {
    let mut rng = StdRng::seed_from_u64(17);
    let m = PathModel::new(&a4()).unwrap();
    for _ in 0..20 {
        let x = random_element(&m, &mut rng);
        let ex = m.skeleton_expand(&x, 1).unwrap();
        assert!(ex.remainder.is_zero());
        assert!(ex.approximant_is_skeletal());
        assert!(m.equivalent(&ex.approximant, &x, 1e-12).unwrap());
    }

    let m = PathModel::new(&lee_yang()).unwrap();
    let u = m.path(&[(1, 0)]).unwrap();
    let x = m.pair(u.clone(), u, c(1.0)).unwrap();
    let ex = m.skeleton_expand(&x, 3).unwrap();
    assert_eq!(ex.remainder.len(), 1);
    let loop2 = m.first_return_basis(2).unwrap()[0].clone();
    let h = m.pair(loop2.clone(), loop2, c(1.0)).unwrap();
    let ex = m.skeleton_expand(&h, 0).unwrap();
    assert_eq!(ex.approximant, h);
    assert!(ex.remainder.is_zero());
}

#[test]
fn expansion_reconstructs_exactly() {
    let mut rng = StdRng::seed_from_u64(23);
    for data in [lee_yang(), s3()] {
        let m = PathModel::new(&data).unwrap();
        for depth in 0..=8 {
            let x = random_element(&m, &mut rng);
            let ex = m.skeleton_expand(&x, depth).unwrap();
            assert!(ex.approximant_is_skeletal());
            let sum = ex.approximant.add(&ex.remainder).unwrap();
            assert!(m.difference(&sum, &x).unwrap().max_magnitude() < 1e-12);
            for (p, _) in ex.remainder.terms() {
                let tail = &p.ket().steps()[p.ket().len() - depth..];
                assert!(tail.iter().all(|e| e.to != data.iota));
            }
        }
    }
}

#[test]
fn lee_yang_remainder_closed_form() {
    // The remainder of a diagonal pair ending at ρ is a single pair of length
    // n + R ending at ρ, so its squared norm is F[ρ]/d^{n+R} = d^{1−n−R}.
    let data = lee_yang();
    let m = PathModel::new(&data).unwrap();
    let prof = classify(&data, DEFAULT_TOLERANCE).unwrap();
    for n in 1..=3 {
        for p in m.enumerate_paths(n, 1).unwrap() {
            let x = m.pair(p.clone(), p, c(1.0)).unwrap();
            for depth in 0..=6 {
                let r = m.skeleton_expand(&x, depth).unwrap().remainder;
                let got = remainder_norm(&r, &prof).unwrap();
                let want = prof.d_rho.powi(1 - n as i32 - depth as i32);
                assert!((got - want).abs() < 1e-12, "n={n} R={depth}: {got} vs {want}");
                let bound = remainder_bound(&x, depth, &m, &prof);
                assert!(got <= bound.value * (1.0 + 1e-9));
            }
        }
    }
}

#[test]
fn remainder_vanishes_for_nilpotent_reduction() {
    let data = a4();
    let m = PathModel::new(&data).unwrap();
    let prof = classify(&data, DEFAULT_TOLERANCE).unwrap();
    let p = m.path(&[(1, 0)]).unwrap();
    let x = m.pair(p.clone(), p, c(1.0)).unwrap();
    for depth in 1..4 {
        let r = m.skeleton_expand(&x, depth).unwrap().remainder;
        assert_eq!(remainder_norm(&r, &prof).unwrap(), 0.0);
    }
    assert_eq!(remainder_norm(&m.zero(), &prof).unwrap(), 0.0);
}

#[test]
fn kms_examples() {
    let data = lee_yang();
    let m = PathModel::new(&data).unwrap();
    let prof = classify(&data, DEFAULT_TOLERANCE).unwrap();
    let p = m.path(&[(1, 0), (1, 0), (1, 0)]).unwrap();
    let q = m.path(&[(1, 0)]).unwrap();
    let x = m.pair(p.clone(), q.clone(), c(1.0)).unwrap();
    let y = m.pair(q, p, c(1.0)).unwrap();
    let k = kms_check(&x, &y, &prof).unwrap();
    assert!(k.pass);
    assert!((k.lhs.re - PHI / PHI.powi(3)).abs() < 1e-12);

    let mut rng = StdRng::seed_from_u64(29);
    for _ in 0..100 {
        let (mm, nn) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let x = random_homogeneous(&m, &mut rng, mm, nn, 3);
        let y = random_element(&m, &mut rng);
        assert!(kms_check(&x, &y, &prof).unwrap().pass);
    }
    let e = Path::empty(0);
    let l2 = m.path(&[(1, 0), (0, 0)]).unwrap();
    let mixed = m.identity().add(&m.pair(l2, e, c(1.0)).unwrap()).unwrap();
    assert!(matches!(kms_check(&mixed, &mixed, &prof), Err(Error::NotHomogeneous(..))));
}
