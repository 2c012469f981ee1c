//! Path model of the generalized Cuntz algebra.
//!
//! Paths on the fusion graph rooted at ι stand for an orthonormal basis of
//! intertwiners; an operator `T_p·T_q*` is a [`PathPair`]. Products follow the
//! prefix rule of [`PathPair::compose`], and the inclusion of one level into
//! the next is [`PathModel::embed`], a sum over all edges leaving the common
//! target. The state is `φ(p,q) = [p = q]·F[target]/d(ρ)^|p|`.
//!
//! Associator data of the underlying category is not modelled; everything
//! here depends only on fusion multiplicities and Frobenius dimensions.

mod element;
mod path;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use element::{multiply, star, AlgebraElement, Scalar};
pub use path::{Edge, Path, PathPair};

use crate::error::{Error, Result};
use crate::fusion::{FusionData, QuantumDimensions};
use crate::spectral::SpectralProfile;

pub const DEFAULT_MAX_PATH_LEN: usize = 16;
pub const DEFAULT_MAX_PATHS: usize = 1_000_000;

/// A validated fusion graph together with enumeration limits.
#[derive(Debug, Clone)]
pub struct PathModel {
    data: FusionData,
    fingerprint: u64,
    max_len: usize,
    max_paths: usize,
}

impl PathModel {
    pub fn new(data: &FusionData) -> Result<Self> {
        data.ensure_valid()?;
        let mut h = DefaultHasher::new();
        data.iota.hash(&mut h);
        data.matrix.hash(&mut h);
        Ok(Self {
            data: data.clone(),
            fingerprint: h.finish(),
            max_len: DEFAULT_MAX_PATH_LEN,
            max_paths: DEFAULT_MAX_PATHS,
        })
    }

    pub fn with_limits(mut self, max_len: usize, max_paths: usize) -> Self {
        self.max_len = max_len;
        self.max_paths = max_paths;
        self
    }

    pub fn data(&self) -> &FusionData {
        &self.data
    }

    pub fn iota(&self) -> usize {
        self.data.iota
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Edges leaving `from`, ordered by `(to, slot)`.
    pub fn edges_from(&self, from: usize) -> impl Iterator<Item = Edge> + '_ {
        (0..self.data.size()).flat_map(move |to| {
            (0..self.data.entry(to, from).max(0) as u32).map(move |slot| Edge::new(from, to, slot))
        })
    }

    /// Checks a path against the graph: rooted at ι, every slot in range.
    pub fn check_path(&self, path: &Path) -> Result<()> {
        if path.source() != self.iota() {
            return Err(Error::BadPath(format!("{path} does not start at ι")));
        }
        for e in path.steps() {
            let bound = self.data.matrix.get(e.to).and_then(|r| r.get(e.from)).copied().unwrap_or(0);
            if i64::from(e.slot) >= bound {
                return Err(Error::BadPath(format!(
                    "slot {} of edge {}→{} exceeds multiplicity {}",
                    e.slot, e.from, e.to, bound
                )));
            }
        }
        Ok(())
    }

    /// Builds a path from ι by `(to, slot)` hops.
    pub fn path(&self, hops: &[(usize, u32)]) -> Result<Path> {
        let mut p = Path::empty(self.iota());
        for &(to, slot) in hops {
            if to >= self.data.size() {
                return Err(Error::BadPath(format!("sector {to} out of range")));
            }
            p = p.extended(Edge::new(p.target(), to, slot));
        }
        self.check_path(&p)?;
        Ok(p)
    }

    fn count_paths(&self, n: usize, target: usize) -> BigInt {
        let mut v = vec![BigInt::zero(); self.data.size()];
        v[self.iota()] = BigInt::one();
        let m = self.data.int_matrix();
        for _ in 0..n {
            v = m.apply(&v);
        }
        v[target].clone()
    }

    fn check_caps(&self, n: usize, expected: &BigInt) -> Result<()> {
        if n > self.max_len {
            return Err(Error::ResourceCap(format!("length {n} exceeds the maximum {}", self.max_len)));
        }
        if *expected > BigInt::from(self.max_paths) {
            return Err(Error::ResourceCap(format!(
                "{expected} paths exceed the maximum {}",
                self.max_paths
            )));
        }
        Ok(())
    }

    /// `can[k][i]`: some path of length `k` leads from `i` to `target`.
    fn reach_table(&self, n: usize, target: usize, avoid_iota: bool) -> Vec<Vec<bool>> {
        let s = self.data.size();
        let mut table = vec![vec![false; s]; n + 1];
        table[0][target] = true;
        for k in 1..=n {
            for i in 0..s {
                table[k][i] = (0..s).any(|j| {
                    self.data.entry(j, i) > 0
                        && table[k - 1][j]
                        && !(avoid_iota && j == self.iota() && k > 1)
                });
            }
        }
        table
    }

    fn walk(&self, n: usize, target: usize, first_return: bool) -> Vec<Path> {
        let table = self.reach_table(n, target, first_return);
        let mut out = Vec::new();
        let mut stack = Vec::new();
        if table[n][self.iota()] {
            stack.push(Path::empty(self.iota()));
        }
        // depth-first, pushing children in reverse so output stays lexicographic
        while let Some(p) = stack.pop() {
            if p.len() == n {
                out.push(p);
                continue;
            }
            let remaining = n - p.len();
            let children: Vec<Path> = self
                .edges_from(p.target())
                .filter(|e| table[remaining - 1][e.to])
                .filter(|e| !(first_return && remaining > 1 && e.to == self.iota()))
                .map(|e| p.extended(e))
                .collect();
            stack.extend(children.into_iter().rev());
        }
        out
    }

    /// All paths of length `n` from ι to `target`, lexicographically ordered.
    /// There are exactly `(Nⁿ)[target][ι]` of them.
    pub fn enumerate_paths(&self, n: usize, target: usize) -> Result<Vec<Path>> {
        self.check_caps(n, &self.count_paths(n, target))?;
        Ok(self.walk(n, target, false))
    }

    /// Loops ι → ι of length `n ≥ 1` that do not visit ι in between.
    pub fn first_return_basis(&self, n: usize) -> Result<Vec<Path>> {
        if n == 0 {
            return Err(Error::ZeroLength(0));
        }
        self.check_caps(n, &crate::series::k_direct(&self.data, n)?)?;
        Ok(self.walk(n, self.iota(), true))
    }

    pub fn skeleton_basis(&self, max_len: usize) -> Result<SkeletonBasis> {
        let by_length = (1..=max_len).map(|n| self.first_return_basis(n)).collect::<Result<_>>()?;
        Ok(SkeletonBasis { by_length })
    }

    pub fn zero<C: Scalar>(&self) -> AlgebraElement<C> {
        AlgebraElement::zero_on(self.fingerprint)
    }

    /// `(∅, ∅)`, the unit.
    pub fn identity<C: Scalar>(&self) -> AlgebraElement<C> {
        let empty = Path::empty(self.iota());
        self.single(PathPair::new(empty.clone(), empty).expect("same target"), C::one())
    }

    pub fn single<C: Scalar>(&self, pair: PathPair, c: C) -> AlgebraElement<C> {
        let mut x = self.zero();
        x.add_term(pair, c);
        x
    }

    /// `c·T_ket·T_bra*`, checking both paths against the graph.
    pub fn pair<C: Scalar>(&self, ket: Path, bra: Path, c: C) -> Result<AlgebraElement<C>> {
        self.check_path(&ket)?;
        self.check_path(&bra)?;
        let pair = PathPair::new(ket, bra)
            .ok_or_else(|| Error::BadPath("ket and bra end at different sectors".into()))?;
        Ok(self.single(pair, c))
    }

    pub fn from_terms<C: Scalar>(
        &self,
        terms: impl IntoIterator<Item = (PathPair, C)>,
    ) -> Result<AlgebraElement<C>> {
        let mut x = self.zero();
        for (pair, c) in terms {
            self.check_path(pair.ket())?;
            self.check_path(pair.bra())?;
            x.add_term(pair, c);
        }
        Ok(x)
    }

    fn owns<C: Scalar>(&self, x: &AlgebraElement<C>) -> Result<()> {
        if x.graph == self.fingerprint {
            Ok(())
        } else {
            Err(Error::MismatchedModel)
        }
    }

    /// Raises every term one level: `(p,q) ↦ Σ_e (p·e, q·e)` over edges `e`
    /// leaving the common target.
    pub fn embed<C: Scalar>(&self, x: &AlgebraElement<C>) -> Result<AlgebraElement<C>> {
        self.owns(x)?;
        let mut out = self.zero();
        for (pair, c) in x.terms() {
            for e in self.edges_from(pair.target()) {
                out.add_term(pair.extended(e), c.clone());
            }
        }
        Ok(out)
    }

    /// Embeds each term until its bra has length `level` (terms already at or
    /// above that level are left alone).
    pub fn raise_to<C: Scalar>(&self, x: &AlgebraElement<C>, level: usize) -> Result<AlgebraElement<C>> {
        self.owns(x)?;
        let mut out = self.zero();
        for (pair, c) in x.terms() {
            let mut part = self.single(pair.clone(), c.clone());
            for _ in pair.bra().len()..level {
                part = self.embed(&part)?;
            }
            out = out.add(&part)?;
        }
        Ok(out)
    }

    /// `x − y` after raising both to the highest bra level present in either.
    /// Zero exactly when the two elements agree as operators.
    pub fn difference<C: Scalar>(
        &self,
        x: &AlgebraElement<C>,
        y: &AlgebraElement<C>,
    ) -> Result<AlgebraElement<C>> {
        let level = x.terms().chain(y.terms()).map(|(p, _)| p.bra().len()).max().unwrap_or(0);
        self.raise_to(x, level)?.sub(&self.raise_to(y, level)?)
    }

    /// Equality up to embedding, with coefficient tolerance `tol` (use 0 for
    /// exact scalars).
    pub fn equivalent<C: Scalar>(&self, x: &AlgebraElement<C>, y: &AlgebraElement<C>, tol: f64) -> Result<bool> {
        Ok(self.difference(x, y)?.max_magnitude() <= tol)
    }

    /// Projection onto the span of the first-return loops of length `n`.
    pub fn support_projection<C: Scalar>(&self, n: usize) -> Result<AlgebraElement<C>> {
        let mut e = self.zero();
        for l in self.first_return_basis(n)? {
            e.add_term(PathPair::new(l.clone(), l).expect("loop"), C::one());
        }
        Ok(e)
    }

    /// Splits `x` into a part spanned by pairs of full ι-loops and a remainder
    /// whose appended segments avoid ι for `depth` steps.
    ///
    /// Each term ending away from ι is pushed one level up; the branches that
    /// land on ι go to the approximant and the others are pushed again.
    pub fn skeleton_expand<C: Scalar>(
        &self,
        x: &AlgebraElement<C>,
        depth: usize,
    ) -> Result<SkeletonExpansion<C>> {
        self.owns(x)?;
        let iota = self.iota();
        let mut approximant = self.zero();
        let mut frontier = self.zero();
        for (pair, c) in x.terms() {
            if pair.target() == iota {
                approximant.add_term(pair.clone(), c.clone());
            } else {
                frontier.add_term(pair.clone(), c.clone());
            }
        }
        for _ in 0..depth {
            let mut next = self.zero();
            for (pair, c) in frontier.terms() {
                for e in self.edges_from(pair.target()) {
                    let up = pair.extended(e);
                    if e.to == iota {
                        approximant.add_term(up, c.clone());
                    } else {
                        next.add_term(up, c.clone());
                    }
                }
            }
            frontier = next;
        }
        Ok(SkeletonExpansion { approximant, remainder: frontier })
    }
}

/// First-return loops grouped by length, `by_length[n-1]` for length `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonBasis {
    pub by_length: Vec<Vec<Path>>,
}

impl SkeletonBasis {
    pub fn at(&self, n: usize) -> &[Path] {
        &self.by_length[n - 1]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_length.iter().map(Vec::len).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonExpansion<C: Scalar> {
    pub approximant: AlgebraElement<C>,
    pub remainder: AlgebraElement<C>,
}

impl<C: Scalar> SkeletonExpansion<C> {
    /// Every approximant term pairs two ι-loops.
    pub fn approximant_is_skeletal(&self) -> bool {
        self.approximant
            .terms()
            .all(|(p, _)| p.target() == p.ket().source())
    }
}

/// `φ` with a caller-supplied diagonal weight `weight(target, length)`.
pub fn phi_with<C: Scalar>(x: &AlgebraElement<C>, weight: impl Fn(usize, usize) -> C) -> C {
    x.terms()
        .filter(|(p, _)| p.ket() == p.bra())
        .fold(C::zero(), |acc, (p, c)| acc + c.clone() * weight(p.target(), p.ket().len()))
}

/// `φ(x)` with `φ(p,q) = [p = q]·F[target]/d^|p|`.
pub fn phi_state(x: &AlgebraElement<Complex64>, dims: &QuantumDimensions, d_rho: f64) -> Complex64 {
    phi_with(x, |target, n| Complex64::new(dims.get(target) / d_rho.powi(n as i32), 0.0))
}

/// Exact `φ(x)` for rational Frobenius data, e.g. the inner case.
pub fn phi_state_exact(x: &AlgebraElement<BigRational>, dims: &[BigRational], d_rho: &BigRational) -> BigRational {
    phi_with(x, |target, n| &dims[target] / num_traits::pow(d_rho.clone(), n))
}

/// `φ(E_n)` for the support projection of the length-`n` skeleton layer;
/// equals `dim(k_n)/d^n`.
pub fn support_expectation(model: &PathModel, profile: &SpectralProfile, n: usize) -> Result<f64> {
    let e = model.support_projection::<Complex64>(n)?;
    Ok(phi_state(&e, &profile.dims, profile.d_rho).re)
}

/// Hilbert norm squared `φ(r*·r)`.
pub fn remainder_norm(remainder: &AlgebraElement<Complex64>, profile: &SpectralProfile) -> Result<f64> {
    let rr = multiply(&star(remainder), remainder)?;
    Ok(phi_state(&rr, &profile.dims, profile.d_rho).re)
}

/// A bound `constant·rate^depth` on [`remainder_norm`] after
/// [`PathModel::skeleton_expand`] of `x` to `depth`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderBound {
    pub constant: f64,
    pub rate: f64,
    pub value: f64,
}

pub fn remainder_bound(
    x: &AlgebraElement<Complex64>,
    depth: usize,
    model: &PathModel,
    profile: &SpectralProfile,
) -> RemainderBound {
    let d = profile.d_rho;
    let env = &profile.envelope;
    let per_term: Vec<(f64, f64)> = x
        .terms()
        .filter(|(p, _)| p.target() != model.iota())
        .map(|(p, c)| {
            let base = env.frobenius_ratio * env.weights[p.target()] / d.powi(p.bra().len() as i32);
            (c.norm(), base)
        })
        .collect();
    // Equal ket and bra lengths across terms make the remainder pieces
    // mutually orthogonal; otherwise fall back to the triangle inequality.
    let shapes: std::collections::BTreeSet<(usize, usize)> =
        x.terms().map(|(p, _)| (p.ket().len(), p.bra().len())).collect();
    let constant = if shapes.len() <= 1 {
        per_term.iter().map(|(c, b)| c * c * b).sum()
    } else {
        per_term.iter().map(|(c, b)| c * b.sqrt()).sum::<f64>().powi(2)
    };
    let rate = env.growth / d;
    RemainderBound { constant, rate, value: constant * rate.powi(depth as i32) }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmsCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub pass: bool,
}

pub const KMS_TOLERANCE: f64 = 1e-9;

/// Checks `φ(x·y) = d^{n−m}·φ(y·x)` for `x` homogeneous with ket length `m`
/// and bra length `n`.
pub fn kms_check(
    x: &AlgebraElement<Complex64>,
    y: &AlgebraElement<Complex64>,
    profile: &SpectralProfile,
) -> Result<KmsCheck> {
    let degree = x.homogeneous_degree()?;
    let phi = |z: &AlgebraElement<Complex64>| phi_state(z, &profile.dims, profile.d_rho);
    let lhs = phi(&multiply(x, y)?);
    let rhs = phi(&multiply(y, x)?) * profile.d_rho.powi(-(degree as i32));
    Ok(KmsCheck { lhs, rhs, pass: (lhs - rhs).norm() <= KMS_TOLERANCE })
}

/// The circle action `α_t`, multiplying a pair of degree `g` by `e^{−igt}`.
pub fn gauge_action(x: &AlgebraElement<Complex64>, t: f64) -> AlgebraElement<Complex64> {
    let mut out = AlgebraElement::zero_on(x.graph);
    for (p, c) in x.terms() {
        out.add_term(p.clone(), c * Complex64::from_polar(1.0, -(p.degree() as f64) * t));
    }
    out
}

#[cfg(test)]
mod tests;
