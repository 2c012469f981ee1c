#![allow(dead_code)]

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

use fusion_skeleton::fusion::{validate, FusionData, SectorLabel};
use fusion_skeleton::pathalg::{AlgebraElement, Path, PathModel};

/// Uniform random matrix with `s ≤ max_s` and entries `≤ max_entry`, ι = 0,
/// resampled until every sector is reachable from ι.
pub fn random_fusion(rng: &mut StdRng, max_s: usize, max_entry: i64) -> FusionData {
    loop {
        let s = rng.gen_range(1..=max_s);
        let matrix: Vec<Vec<i64>> =
            (0..s).map(|_| (0..s).map(|_| rng.gen_range(0..=max_entry)).collect()).collect();
        let sectors = (0..s).map(|i| SectorLabel::new(format!("s{i}"))).collect();
        let data = FusionData { sectors, iota: 0, matrix };
        if validate(&data).is_ok() {
            return data;
        }
    }
}

/// Like [`random_fusion`], restricted to strongly connected graphs.
pub fn random_connected(rng: &mut StdRng, max_s: usize, max_entry: i64) -> FusionData {
    loop {
        let d = random_fusion(rng, max_s, max_entry);
        if d.is_strongly_connected() {
            return d;
        }
    }
}

fn random_path(model: &PathModel, rng: &mut StdRng, len: usize, target: usize) -> Option<Path> {
    let paths = model.enumerate_paths(len, target).ok()?;
    (!paths.is_empty()).then(|| paths[rng.gen_range(0..paths.len())].clone())
}

fn coeff(rng: &mut StdRng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random element whose terms all have ket length `m` and bra length `n`.
/// May be zero when no paths of those lengths share a target.
pub fn random_homogeneous(model: &PathModel, rng: &mut StdRng, m: usize, n: usize, terms: usize) -> AlgebraElement {
    let s = model.data().size();
    let mut x = model.zero();
    for _ in 0..terms {
        let target = rng.gen_range(0..s);
        if let (Some(p), Some(q)) = (random_path(model, rng, m, target), random_path(model, rng, n, target)) {
            x = x.add(&model.pair(p, q, coeff(rng)).unwrap()).unwrap();
        }
    }
    x
}

/// Nonzero homogeneous element with lengths below `max_len`.
pub fn random_nonzero_homogeneous(model: &PathModel, rng: &mut StdRng, max_len: usize) -> AlgebraElement {
    loop {
        let (m, n) = (rng.gen_range(0..max_len), rng.gen_range(0..max_len));
        let x = random_homogeneous(model, rng, m, n, 3);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Sum of up to three homogeneous pieces with lengths below `max_len`.
pub fn random_element(model: &PathModel, rng: &mut StdRng, max_len: usize) -> AlgebraElement {
    let mut x = model.zero();
    for _ in 0..rng.gen_range(1..=3) {
        let (m, n) = (rng.gen_range(0..max_len), rng.gen_range(0..max_len));
        x = x.add(&random_homogeneous(model, rng, m, n, 2)).unwrap();
    }
    x
}
