//! Exact truncated power series and the dimension generating functions
//! `h(t) = Σ dim(h_n) tⁿ` and `k(t) = 1 − 1/h(t)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fusion::FusionData;
use crate::spectral::SpectralProfile;

pub const DEFAULT_ORDER: usize = 32;

/// Power series with exact rational coefficients `c_0..=c_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coefficients: Vec<BigRational>,
}

impl RationalSeries {
    pub fn zero(order: usize) -> Self {
        Self { coefficients: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coefficients[0] = BigRational::one();
        s
    }

    /// Builds a series from leading coefficients, zero-padded (or truncated) to `order`.
    pub fn from_coefficients<I, T>(coefficients: I, order: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigRational>,
    {
        let mut c: Vec<BigRational> = coefficients.into_iter().take(order + 1).map(Into::into).collect();
        c.resize(order + 1, BigRational::zero());
        Self { coefficients: c }
    }

    pub fn from_integers(coefficients: &[i64], order: usize) -> Self {
        Self::from_coefficients(coefficients.iter().map(|&c| BigRational::from_integer(c.into())), order)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> &BigRational {
        &self.coefficients[n]
    }

    /// Coefficients as integers, or `None` if any is fractional.
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.coefficients
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coefficients(self.coefficients.iter().cloned(), order)
    }

    fn common_order(&self, other: &Self) -> usize {
        self.order().min(other.order())
    }

    /// Multiplicative inverse of a series with constant term 1, by the
    /// recurrence `b_n = −Σ_{k=1..n} a_k b_{n−k}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let a = &self.coefficients;
        if !a[0].is_one() {
            return Err(Error::NonUnitConstant(a[0].to_string()));
        }
        let mut b: Vec<BigRational> = Vec::with_capacity(a.len());
        b.push(BigRational::one());
        for n in 1..a.len() {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if !a[k].is_zero() && !b[n - k].is_zero() {
                    acc += &a[k] * &b[n - k];
                }
            }
            b.push(-acc);
        }
        Ok(Self { coefficients: b })
    }

    /// Partial sums `Σ_{n≤T} c_n tⁿ` for `T = 0..=terms`.
    pub fn evaluate(&self, t: f64, terms: usize) -> Result<Vec<f64>> {
        if terms > self.order() {
            return Err(Error::TruncationExceeded { requested: terms, order: self.order() });
        }
        let mut sums = Vec::with_capacity(terms + 1);
        let mut acc = 0.0;
        let mut power = 1.0;
        for c in &self.coefficients[..=terms] {
            acc += c.to_f64().unwrap_or(f64::NAN) * power;
            sums.push(acc);
            power *= t;
        }
        Ok(sums)
    }
}

impl Add for &RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: Self) -> RationalSeries {
        let m = self.common_order(rhs);
        RationalSeries {
            coefficients: (0..=m).map(|i| &self.coefficients[i] + &rhs.coefficients[i]).collect(),
        }
    }
}

impl Sub for &RationalSeries {
    type Output = RationalSeries;
    fn sub(self, rhs: Self) -> RationalSeries {
        let m = self.common_order(rhs);
        RationalSeries {
            coefficients: (0..=m).map(|i| &self.coefficients[i] - &rhs.coefficients[i]).collect(),
        }
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;
    fn neg(self) -> RationalSeries {
        RationalSeries { coefficients: self.coefficients.iter().map(|c| -c).collect() }
    }
}

impl Mul for &RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: Self) -> RationalSeries {
        let m = self.common_order(rhs);
        let mut out = vec![BigRational::zero(); m + 1];
        for (i, a) in self.coefficients[..=m].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coefficients[..=m - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        RationalSeries { coefficients: out }
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·t")?,
                _ => write!(f, "{c}·t^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

/// `dim(h_n) = (Nⁿ)[ι][ι]` for `n = 0..=order`, by iterated exact matrix–vector products.
pub fn h_series(data: &FusionData, order: usize) -> Result<RationalSeries> {
    Ok(RationalSeries::from_coefficients(h_dims(data, order)?.into_iter().map(BigRational::from_integer), order))
}

pub(crate) fn h_dims(data: &FusionData, order: usize) -> Result<Vec<BigInt>> {
    data.ensure_valid()?;
    let n = data.int_matrix();
    let mut v = vec![BigInt::zero(); data.size()];
    v[data.iota] = BigInt::one();
    let mut out = Vec::with_capacity(order + 1);
    for step in 0..=order {
        out.push(v[data.iota].clone());
        if step < order {
            v = n.apply(&v);
        }
    }
    Ok(out)
}

/// `k(t) = 1 − 1/h(t)`.
pub fn k_from_h(h: &RationalSeries) -> Result<RationalSeries> {
    let inv = h.reciprocal()?;
    Ok(&RationalSeries::one(h.order()) - &inv)
}

/// `dim(k_n) = [N (QNQ)^{n−2} N]_{ιι}` for `n ≥ 2`, and `N[ι][ι]` for `n = 1`.
pub fn k_direct(data: &FusionData, n: usize) -> Result<BigInt> {
    data.ensure_valid()?;
    if n == 0 {
        return Err(Error::ZeroLength(n));
    }
    let iota = data.iota;
    if n == 1 {
        return Ok(BigInt::from(data.entry(iota, iota)));
    }
    let red = crate::fusion::reduced_matrix(data)?.int_matrix();
    // Q N e_ι: first step out of ι, landing anywhere but ι
    let mut w: Vec<BigInt> = (0..data.size())
        .map(|i| if i == iota { BigInt::zero() } else { BigInt::from(data.entry(i, iota)) })
        .collect();
    for _ in 0..n - 2 {
        w = red.apply(&w);
    }
    Ok((0..data.size())
        .map(|j| BigInt::from(data.entry(iota, j)) * &w[j])
        .sum())
}

/// `dim(k_n)` for `n = 1..=order`, reusing the vector `(QNQ)^{n−2}·QNe_ι`
/// across lengths instead of restarting [`k_direct`] for each `n`.
pub fn k_direct_range(data: &FusionData, order: usize) -> Result<Vec<BigInt>> {
    data.ensure_valid()?;
    let iota = data.iota;
    let s = data.size();
    let mut out = Vec::with_capacity(order);
    if order == 0 {
        return Ok(out);
    }
    out.push(BigInt::from(data.entry(iota, iota)));
    let red = crate::fusion::reduced_matrix(data)?.int_matrix();
    let mut w: Vec<BigInt> = (0..s)
        .map(|i| if i == iota { BigInt::zero() } else { BigInt::from(data.entry(i, iota)) })
        .collect();
    for n in 2..=order {
        if n > 2 {
            w = red.apply(&w);
        }
        out.push((0..s).map(|j| BigInt::from(data.entry(iota, j)) * &w[j]).sum());
    }
    Ok(out)
}

/// Dimension of the whole skeleton space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkeletonDim {
    Finite(BigInt),
    Infinite,
}

impl SkeletonDim {
    pub fn is_finite(&self) -> bool {
        matches!(self, SkeletonDim::Finite(_))
    }

    /// As a float, with `Infinite` mapped to `+∞`.
    pub fn as_f64(&self) -> f64 {
        match self {
            SkeletonDim::Finite(n) => n.to_f64().unwrap_or(f64::INFINITY),
            SkeletonDim::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for SkeletonDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkeletonDim::Finite(n) => write!(f, "{n}"),
            SkeletonDim::Infinite => f.write_str("infinite"),
        }
    }
}

/// `dim K = k(1)`. Finite exactly when the reduced fusion matrix is nilpotent;
/// otherwise `k(1)` diverges and `Infinite` is returned.
pub fn skeleton_dim(data: &FusionData, spectral: &SpectralProfile) -> Result<SkeletonDim> {
    data.ensure_valid()?;
    if spectral.dims.len() != data.size() {
        return Err(Error::ProfileMismatch { profile: spectral.dims.len(), data: data.size() });
    }
    let Some(m) = spectral.nilpotency_index else {
        return Ok(SkeletonDim::Infinite);
    };
    // k_n vanishes once (QNQ)^{n-2} = 0, i.e. for n ≥ m + 2
    let total = (1..=m + 1).map(|n| k_direct(data, n)).sum::<Result<BigInt>>()?;
    Ok(SkeletonDim::Finite(total))
}

/// Integer dimension sequences of `h_n` and `k_n` plus the skeleton dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionProfile {
    /// `dim(h_n)`, `n = 0..=order`.
    pub h_dims: Vec<BigInt>,
    /// `dim(k_n)`, `n = 1..=order`; index 0 holds `k_1`.
    pub k_dims: Vec<BigInt>,
    pub skeleton_dim: SkeletonDim,
}

impl DimensionProfile {
    pub fn build(data: &FusionData, order: usize, spectral: &SpectralProfile) -> Result<Self> {
        Ok(Self {
            h_dims: h_dims(data, order)?,
            k_dims: k_direct_range(data, order)?,
            skeleton_dim: skeleton_dim(data, spectral)?,
        })
    }

    pub fn k(&self, n: usize) -> &BigInt {
        &self.k_dims[n - 1]
    }
}
