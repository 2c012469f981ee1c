use std::fmt;

/// One step `from → to` of the fusion graph, with `slot` picking one of the
/// `N[to][from]` parallel edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub slot: u32,
}

impl Edge {
    pub fn new(from: usize, to: usize, slot: u32) -> Self {
        Self { from, to, slot }
    }
}

/// A chain of edges starting at `source`. Paths rooted at ι index a basis of
/// the intertwiner space between their target sector and `ι∘ρⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    source: usize,
    steps: Vec<Edge>,
}

impl Path {
    pub fn empty(source: usize) -> Self {
        Self { source, steps: Vec::new() }
    }

    /// Chains `steps` from `source`; `None` if consecutive edges do not meet.
    pub fn from_steps(source: usize, steps: Vec<Edge>) -> Option<Self> {
        let mut at = source;
        for e in &steps {
            if e.from != at {
                return None;
            }
            at = e.to;
        }
        Some(Self { source, steps })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.steps.last().map_or(self.source, |e| e.to)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Edge] {
        &self.steps
    }

    pub fn extended(&self, edge: Edge) -> Self {
        debug_assert_eq!(edge.from, self.target());
        let mut steps = Vec::with_capacity(self.steps.len() + 1);
        steps.extend_from_slice(&self.steps);
        steps.push(edge);
        Self { source: self.source, steps }
    }

    /// `self` followed by `tail`; `tail` must start where `self` ends.
    pub fn concat(&self, tail: &Path) -> Self {
        assert_eq!(tail.source, self.target(), "paths do not chain");
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&tail.steps);
        Self { source: self.source, steps }
    }

    /// If `prefix` is an initial segment of `self`, the remaining segment.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if prefix.source != self.source || prefix.len() > self.len() {
            return None;
        }
        if self.steps[..prefix.len()] != prefix.steps[..] {
            return None;
        }
        Some(Path { source: prefix.target(), steps: self.steps[prefix.len()..].to_vec() })
    }

    /// Sectors visited strictly between the start and the end.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.steps.len();
        self.steps.iter().take(n.saturating_sub(1)).map(|e| e.to)
    }

    /// Cuts a loop at every interior return to its source, giving its
    /// first-return factors in order.
    pub fn first_return_factors(&self) -> Option<Vec<Path>> {
        if self.target() != self.source {
            return None;
        }
        let mut out = Vec::new();
        let mut current = Vec::new();
        for e in &self.steps {
            current.push(*e);
            if e.to == self.source {
                out.push(Path { source: self.source, steps: std::mem::take(&mut current) });
            }
        }
        Some(out)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps.is_empty() {
            return write!(f, "∅@{}", self.source);
        }
        write!(f, "{}", self.source)?;
        for e in &self.steps {
            if e.slot == 0 {
                write!(f, "→{}", e.to)?;
            } else {
                write!(f, "→{}#{}", e.to, e.slot)?;
            }
        }
        Ok(())
    }
}

/// The operator `T_ket·T_bra*` for two paths with a common target.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathPair {
    ket: Path,
    bra: Path,
}

impl PathPair {
    pub fn new(ket: Path, bra: Path) -> Option<Self> {
        (ket.target() == bra.target() && ket.source() == bra.source()).then_some(Self { ket, bra })
    }

    pub fn ket(&self) -> &Path {
        &self.ket
    }

    pub fn bra(&self) -> &Path {
        &self.bra
    }

    pub fn target(&self) -> usize {
        self.ket.target()
    }

    /// `|ket| − |bra|`.
    pub fn degree(&self) -> i64 {
        self.ket.len() as i64 - self.bra.len() as i64
    }

    pub fn adjoint(&self) -> Self {
        Self { ket: self.bra.clone(), bra: self.ket.clone() }
    }

    pub(crate) fn extended(&self, edge: Edge) -> Self {
        Self { ket: self.ket.extended(edge), bra: self.bra.extended(edge) }
    }

    /// The pair rule: `(p,q)·(p',q')` is `(p·s, q')` when `p' = q·s`,
    /// `(p, q'·s)` when `q = p'·s`, and zero otherwise.
    pub fn compose(&self, rhs: &PathPair) -> Option<PathPair> {
        if let Some(s) = rhs.ket.strip_prefix(&self.bra) {
            return Some(PathPair { ket: self.ket.concat(&s), bra: rhs.bra.clone() });
        }
        if let Some(s) = self.bra.strip_prefix(&rhs.ket) {
            return Some(PathPair { ket: self.ket.clone(), bra: rhs.bra.concat(&s) });
        }
        None
    }
}

impl fmt::Display for PathPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.ket, self.bra)
    }
}
