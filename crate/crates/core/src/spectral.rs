//! Perron–Frobenius analysis of the fusion matrix, the exceptional/generic
//! split, and the constants derived from them.
//!
//! The Frobenius vector is the *left* Perron vector, `Nᵀ·F = d(ρ)·F`, which
//! is the dimension identity `d(σ_j)·d(ρ) = Σ_i N[i][j]·d(σ_i)` under the
//! column-source convention of [`FusionData`]. For the symmetric matrices of
//! self-conjugate ρ it coincides with the right Perron vector.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::fusion::{reduced_matrix, FusionData, QuantumDimensions, ReducedFusion};
use crate::series::{k_direct, SkeletonDim};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const ITERATION_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Reduced fusion matrix nilpotent: the algebra is generated by a finite skeleton.
    Exceptional,
    Generic,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Exceptional => "EXCEPTIONAL",
            Classification::Generic => "GENERIC",
        })
    }
}

/// A certified geometric envelope for walks that stay off ι.
///
/// `weights` is positive on every non-ι sector and zero at ι, and satisfies
/// `N_redᵀ·weights ≤ growth·weights` entrywise (a Collatz–Wielandt bound), so
/// `Fᵀ·N_red^R·e_j ≤ frobenius_ratio·growth^R·weights[j]` for every `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayEnvelope {
    pub weights: Vec<f64>,
    pub growth: f64,
    /// `max_i F[i] / weights[i]` over non-ι sectors.
    pub frobenius_ratio: f64,
}

impl DecayEnvelope {
    /// Upper bound for `Fᵀ·N_red^R·e_j`.
    pub fn walk_mass_bound(&self, j: usize, steps: usize) -> f64 {
        self.frobenius_ratio * self.growth.powi(steps as i32) * self.weights[j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    pub d_rho: f64,
    pub dims: QuantumDimensions,
    pub nilpotency_index: Option<usize>,
    pub classification: Classification,
    pub reduced_radius: f64,
    pub reduced_opnorm: f64,
    /// `reduced_radius / d_rho`.
    pub decay_rate: f64,
    pub kms_temperature: Option<f64>,
    /// Final Perron residual `‖NᵀF − dF‖ / ‖F‖`.
    pub residual: f64,
    pub envelope: DecayEnvelope,
}

impl SpectralProfile {
    pub fn size(&self) -> usize {
        self.dims.len()
    }

    pub fn frobenius(&self, i: usize) -> f64 {
        self.dims.get(i)
    }
}

fn transpose_f64(m: &[Vec<i64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i] as f64).collect()).collect()
}

fn apply(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Perron eigenvalue and ι-normalized Frobenius vector by shifted power
/// iteration on `Nᵀ + I`. The shift makes periodic graphs aperiodic without
/// moving the eigenvector.
pub fn perron(data: &FusionData, tolerance: f64) -> Result<(f64, QuantumDimensions)> {
    data.ensure_valid()?;
    let (d, dims, _) = perron_with_residual(data, tolerance)?;
    Ok((d, dims))
}

fn perron_with_residual(data: &FusionData, tolerance: f64) -> Result<(f64, QuantumDimensions, f64)> {
    let nt = transpose_f64(&data.matrix);
    let s = nt.len();
    let mut v = vec![1.0 / (s as f64).sqrt(); s];
    let mut residual = f64::INFINITY;
    for _ in 0..ITERATION_BUDGET {
        let w = apply(&nt, &v);
        let d = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        residual = norm(&w.iter().zip(&v).map(|(a, b)| a - d * b).collect::<Vec<_>>());
        if residual <= tolerance {
            let scale = v[data.iota];
            if scale <= 0.0 {
                break;
            }
            let mut values: Vec<f64> = v.iter().map(|x| (x / scale).max(0.0)).collect();
            values[data.iota] = 1.0;
            let fv = apply(&nt, &values);
            let rel = norm(&fv.iter().zip(&values).map(|(a, b)| a - d * b).collect::<Vec<_>>())
                / norm(&values);
            return Ok((d, QuantumDimensions { values, tolerance }, rel));
        }
        let shifted: Vec<f64> = w.iter().zip(&v).map(|(a, b)| a + b).collect();
        let n = norm(&shifted);
        v = shifted.into_iter().map(|x| x / n).collect();
    }
    Err(Error::NonConvergence { iterations: ITERATION_BUDGET, residual })
}

/// Smallest `m ≤ size` with `N_red^m = 0`, by exact integer powers.
pub fn nilpotency_index(red: &ReducedFusion) -> Option<usize> {
    let m = red.int_matrix();
    let mut power = m.clone();
    for k in 1..=red.size() {
        if power.is_zero() {
            return Some(k);
        }
        power = power.mul(&m);
    }
    None
}

/// Spectral radius of a non-negative integer matrix: the largest Perron root
/// over its strongly connected components. Acyclic components contribute 0.
pub fn spectral_radius(matrix: &[Vec<i64>], tolerance: f64) -> Result<f64> {
    let n = matrix.len();
    let mut graph = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..n).map(|i| graph.add_node(i)).collect();
    for i in 0..n {
        for j in 0..n {
            if matrix[i][j] > 0 {
                graph.add_edge(nodes[j], nodes[i], ());
            }
        }
    }
    let mut radius: f64 = 0.0;
    for component in tarjan_scc(&graph) {
        let idx: Vec<usize> = component.iter().map(|&nx| graph[nx]).collect();
        let block: Vec<Vec<f64>> =
            idx.iter().map(|&i| idx.iter().map(|&j| matrix[i][j] as f64).collect()).collect();
        if idx.len() == 1 && block[0][0] == 0.0 {
            continue;
        }
        radius = radius.max(irreducible_perron_root(&block, tolerance)?);
    }
    Ok(radius)
}

/// Perron root of an irreducible non-negative matrix, bracketed by the
/// Collatz–Wielandt bounds `min_i (Av)_i/v_i ≤ r ≤ max_i (Av)_i/v_i`.
fn irreducible_perron_root(block: &[Vec<f64>], tolerance: f64) -> Result<f64> {
    let n = block.len();
    let mut v = vec![1.0; n];
    let mut gap = f64::INFINITY;
    for _ in 0..ITERATION_BUDGET {
        let w = apply(block, &v);
        let ratios = w.iter().zip(&v).map(|(a, b)| a / b);
        let (lo, hi) = ratios.fold((f64::INFINITY, 0.0_f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        gap = hi - lo;
        if gap <= tolerance * hi.max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
        let shifted: Vec<f64> = w.iter().zip(&v).map(|(a, b)| a + b).collect();
        let m = shifted.iter().cloned().fold(0.0, f64::max);
        v = shifted.into_iter().map(|x| x / m).collect();
    }
    Err(Error::NonConvergence { iterations: ITERATION_BUDGET, residual: gap })
}

fn operator_norm(matrix: &[Vec<i64>]) -> f64 {
    let n = matrix.len();
    let m = DMatrix::from_fn(n, n, |i, j| matrix[i][j] as f64);
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Positive weights on the non-ι sectors with a Collatz–Wielandt growth bound
/// for `N_redᵀ`. The weights come from a few power steps on `N_redᵀ + εJ`,
/// which is positive, so they are strictly positive; the bound is then
/// recomputed from the unperturbed matrix, which makes it certified whatever
/// the convergence state.
fn decay_envelope(red: &ReducedFusion, frobenius: &[f64]) -> DecayEnvelope {
    let s = red.size();
    let iota = red.iota;
    let others: Vec<usize> = (0..s).filter(|&i| i != iota).collect();
    let mut weights = vec![0.0; s];
    if others.is_empty() {
        return DecayEnvelope { weights, growth: 0.0, frobenius_ratio: 0.0 };
    }
    let bt: Vec<Vec<f64>> = others
        .iter()
        .map(|&i| others.iter().map(|&j| red.matrix[j][i] as f64).collect())
        .collect();
    let eps = 1e-10;
    let mut u = vec![1.0; others.len()];
    for _ in 0..20_000 {
        let next: Vec<f64> = bt
            .iter()
            .map(|row| {
                let total: f64 = u.iter().sum();
                row.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() + eps * total
            })
            .collect();
        let m = next.iter().cloned().fold(0.0, f64::max);
        let next: Vec<f64> = next.into_iter().map(|x| x / m).collect();
        let delta = next.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        u = next;
        if delta < 1e-15 {
            break;
        }
    }
    let bu = apply(&bt, &u);
    let growth = bu.iter().zip(&u).map(|(a, b)| a / b).fold(0.0, f64::max);
    let mut frobenius_ratio: f64 = 0.0;
    for (k, &i) in others.iter().enumerate() {
        weights[i] = u[k];
        frobenius_ratio = frobenius_ratio.max(frobenius[i] / u[k]);
    }
    DecayEnvelope { weights, growth, frobenius_ratio }
}

/// `2π / ln d(ρ)`, or `None` when `d(ρ) ≤ 1`.
pub fn kms_temperature(d_rho: f64) -> Option<f64> {
    (d_rho > 1.0).then(|| 2.0 * PI / d_rho.ln())
}

/// Assembles the full [`SpectralProfile`].
pub fn classify(data: &FusionData, tolerance: f64) -> Result<SpectralProfile> {
    data.ensure_valid()?;
    let (d_rho, dims, residual) = perron_with_residual(data, tolerance)?;
    let red = reduced_matrix(data)?;
    let nilpotency_index = nilpotency_index(&red);
    let reduced_radius = if nilpotency_index.is_some() {
        0.0
    } else {
        spectral_radius(&red.matrix, tolerance)?
    };
    let envelope = decay_envelope(&red, &dims.values);
    Ok(SpectralProfile {
        d_rho,
        nilpotency_index,
        classification: if nilpotency_index.is_some() {
            Classification::Exceptional
        } else {
            Classification::Generic
        },
        reduced_radius,
        reduced_opnorm: operator_norm(&red.matrix),
        decay_rate: reduced_radius / d_rho,
        kms_temperature: kms_temperature(d_rho),
        residual,
        envelope,
        dims,
    })
}

/// Partial sums `S_T = Σ_{n≤T} dim(k_n)·d(ρ)^{-n}` with a certified tail.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSums {
    /// `sums[T-1] = S_T`, `T = 1..=terms`.
    pub sums: Vec<f64>,
    /// `tail_bounds[T-1] ≥ 1 − S_T`, of the form `constant·rate^T`.
    pub tail_bounds: Vec<f64>,
    pub constant: f64,
    pub rate: f64,
    pub monotone: bool,
    pub bounded: bool,
}

impl SupportSums {
    pub fn last(&self) -> f64 {
        self.sums.last().copied().unwrap_or(0.0)
    }
}

/// Expectation of the partial skeleton support, which tends to 1.
///
/// Walks leaving ι that have not come back after `T` steps carry
/// `Fᵀ·N_red^{T−1}·w / d^T` of the total mass (`w = QNe_ι`); the envelope
/// bounds that by `constant·(growth/d)^T`.
pub fn lemma41_partial_sums(
    data: &FusionData,
    profile: &SpectralProfile,
    terms: usize,
) -> Result<SupportSums> {
    data.ensure_valid()?;
    if profile.size() != data.size() {
        return Err(Error::ProfileMismatch { profile: profile.size(), data: data.size() });
    }
    let d = profile.d_rho;
    let mut sums = Vec::with_capacity(terms);
    let mut acc = 0.0;
    for n in 1..=terms {
        let k = k_direct(data, n)?.to_f64().unwrap_or(f64::INFINITY);
        acc += k / d.powi(n as i32);
        sums.push(acc);
    }
    let env = &profile.envelope;
    let iota = data.iota;
    let leave_mass: f64 = (0..data.size())
        .filter(|&i| i != iota)
        .map(|i| data.entry(i, iota) as f64 * env.weights[i])
        .sum();
    let (constant, rate) = if leave_mass == 0.0 || env.growth == 0.0 {
        // nothing leaves ι, or whatever leaves returns after one more step
        let c = env.frobenius_ratio * leave_mass;
        (c, 0.0)
    } else {
        (env.frobenius_ratio * leave_mass / env.growth, env.growth / d)
    };
    let tail_bounds = (1..=terms)
        .map(|t| {
            if rate == 0.0 {
                if t == 1 { constant / d } else { 0.0 }
            } else {
                constant * rate.powi(t as i32)
            }
        })
        .collect();
    let monotone = sums.windows(2).all(|w| w[1] >= w[0]);
    let bounded = sums.iter().all(|&x| x <= 1.0 + 1e-9);
    Ok(SupportSums { sums, tail_bounds, constant, rate, monotone, bounded })
}

/// The two-sided bound `dim(k_1) ≤ d(ρ) ≤ dim(K)` and its equality cases.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionBounds {
    pub lower_holds: bool,
    pub upper_holds: bool,
    pub lower_equal: bool,
    pub upper_equal: bool,
    /// The skeleton consists of `k_1` alone.
    pub skeleton_is_k1: bool,
}

impl DimensionBounds {
    /// Equality on either side iff equality on the other iff the skeleton is
    /// `k_1`. Only meaningful for proper ρ (`d > 1`).
    pub fn equalities_agree(&self) -> bool {
        self.lower_equal == self.upper_equal && self.upper_equal == self.skeleton_is_k1
    }
}

pub fn dimension_bounds(k1: u64, d_rho: f64, skeleton: &SkeletonDim, tolerance: f64) -> DimensionBounds {
    let k1f = k1 as f64;
    let skel = skeleton.as_f64();
    let skeleton_is_k1 = matches!(skeleton, SkeletonDim::Finite(n) if n.to_u64() == Some(k1));
    DimensionBounds {
        lower_holds: k1f <= d_rho + tolerance,
        upper_holds: d_rho <= skel + tolerance,
        lower_equal: (k1f - d_rho).abs() <= tolerance,
        upper_equal: skel.is_finite() && (skel - d_rho).abs() <= tolerance,
        skeleton_is_k1,
    }
}
