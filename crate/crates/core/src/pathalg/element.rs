use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::path::PathPair;
use crate::error::{Error, Result};

/// Coefficient field of an [`AlgebraElement`].
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;
    /// Absolute value, for tolerance checks.
    fn magnitude(&self) -> f64;
}

impl Scalar for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Scalar for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Scalar for f64 {
    fn conj(&self) -> Self {
        *self
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

/// Finite linear combination of path pairs over one fusion graph. Canonical:
/// no zero coefficients, one entry per pair.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<C: Scalar = Complex64> {
    pub(crate) graph: u64,
    pub(crate) terms: BTreeMap<PathPair, C>,
}

impl<C: Scalar> AlgebraElement<C> {
    pub(crate) fn zero_on(graph: u64) -> Self {
        Self { graph, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PathPair, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, pair: &PathPair) -> C {
        self.terms.get(pair).cloned().unwrap_or_else(C::zero)
    }

    pub(crate) fn add_term(&mut self, pair: PathPair, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&pair) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(pair, sum);
                }
            }
            None => {
                self.terms.insert(pair, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero_on(self.graph);
        for (p, v) in &self.terms {
            out.add_term(p.clone(), v.clone() * c.clone());
        }
        out
    }

    fn same_graph(&self, other: &Self) -> Result<()> {
        if self.graph == other.graph {
            Ok(())
        } else {
            Err(Error::MismatchedModel)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_graph(other)?;
        let mut out = self.clone();
        for (p, v) in &other.terms {
            out.add_term(p.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-C::one()))
    }

    /// Gauge degrees `|ket| − |bra|` present, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(PathPair::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The single gauge degree of a homogeneous element (0 for zero).
    pub fn homogeneous_degree(&self) -> Result<i64> {
        match self.degrees()[..] {
            [] => Ok(0),
            [g] => Ok(g),
            [a, b, ..] => Err(Error::NotHomogeneous(a, b)),
        }
    }

    /// Splits into gauge-homogeneous parts.
    pub fn by_degree(&self) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for (p, v) in &self.terms {
            out.entry(p.degree())
                .or_insert_with(|| Self::zero_on(self.graph))
                .add_term(p.clone(), v.clone());
        }
        out
    }

    /// Largest coefficient magnitude, 0 for the zero element.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(Scalar::magnitude).fold(0.0, f64::max)
    }
}

/// Bilinear extension of [`PathPair::compose`].
pub fn multiply<C: Scalar>(x: &AlgebraElement<C>, y: &AlgebraElement<C>) -> Result<AlgebraElement<C>> {
    x.same_graph(y)?;
    let mut out = AlgebraElement::zero_on(x.graph);
    for (a, ca) in &x.terms {
        for (b, cb) in &y.terms {
            if let Some(pair) = a.compose(b) {
                out.add_term(pair, ca.clone() * cb.clone());
            }
        }
    }
    Ok(out)
}

/// Swaps ket and bra of every pair and conjugates coefficients.
pub fn star<C: Scalar>(x: &AlgebraElement<C>) -> AlgebraElement<C> {
    AlgebraElement {
        graph: x.graph,
        terms: x.terms.iter().map(|(p, c)| (p.adjoint(), c.conj())).collect(),
    }
}

impl<C: Scalar> fmt::Display for AlgebraElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}){p}")?;
        }
        Ok(())
    }
}
