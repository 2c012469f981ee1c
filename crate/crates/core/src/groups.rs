//! Fusion data from finite-group character tables.
//!
//! Tensoring with a representation `D` of a finite group `G` gives a fusion
//! graph on the irreducibles reachable from the trivial one. Character sums
//! also count invariants in `D^⊗n` directly, which is used as an independent
//! check on [`crate::series::h_series`].

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fusion::{FusionData, SectorLabel};

/// Tolerance for rounding character sums to integers.
pub const ROUNDING_TOLERANCE: f64 = 1e-6;
/// Tolerance for the row orthogonality relations.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    pub group_name: String,
    pub class_sizes: Vec<u64>,
    /// One row per irreducible, one column per conjugacy class. The first
    /// column is the identity class.
    pub characters: Vec<Vec<Complex64>>,
    pub irrep_names: Vec<String>,
}

impl CharacterTable {
    /// Builds and validates a table.
    pub fn new(
        group_name: impl Into<String>,
        class_sizes: Vec<u64>,
        characters: Vec<Vec<Complex64>>,
        irrep_names: Vec<String>,
    ) -> Result<Self> {
        let table = Self { group_name: group_name.into(), class_sizes, characters, irrep_names };
        table.validate()?;
        Ok(table)
    }

    pub fn order(&self) -> u64 {
        self.class_sizes.iter().sum()
    }

    pub fn irrep_count(&self) -> usize {
        self.characters.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.irrep_names.iter().position(|n| n == name)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCharacterTable(m));
        let classes = self.class_sizes.len();
        if classes == 0 {
            return bad("no conjugacy classes".into());
        }
        if self.class_sizes.contains(&0) {
            return bad("class sizes must be positive".into());
        }
        if self.characters.len() != self.irrep_names.len() {
            return bad(format!(
                "{} character rows but {} irrep names",
                self.characters.len(),
                self.irrep_names.len()
            ));
        }
        let names: BTreeSet<&str> = self.irrep_names.iter().map(String::as_str).collect();
        if names.len() != self.irrep_names.len() {
            return bad("duplicate irrep name".into());
        }
        for (name, row) in self.irrep_names.iter().zip(&self.characters) {
            if row.len() != classes {
                return bad(format!("row `{name}` has {} entries, expected {classes}", row.len()));
            }
            let dim = row[0];
            if dim.im.abs() > ORTHOGONALITY_TOLERANCE
                || dim.re < 0.5
                || (dim.re - dim.re.round()).abs() > ORTHOGONALITY_TOLERANCE
            {
                return bad(format!("row `{name}`: identity entry {dim} is not a positive integer"));
            }
        }
        for i in 0..self.irrep_count() {
            for j in 0..self.irrep_count() {
                let ip = self.inner_product(i, j);
                let want = if i == j { 1.0 } else { 0.0 };
                if (ip - Complex64::new(want, 0.0)).norm() > ORTHOGONALITY_TOLERANCE {
                    return bad(format!(
                        "rows `{}` and `{}` have inner product {ip}",
                        self.irrep_names[i], self.irrep_names[j]
                    ));
                }
            }
        }
        Ok(())
    }

    /// `(1/|G|) Σ_c |c| χ_i(c) conj(χ_j(c))`.
    fn inner_product(&self, i: usize, j: usize) -> Complex64 {
        let sum: Complex64 = self
            .class_sizes
            .iter()
            .zip(self.characters[i].iter().zip(&self.characters[j]))
            .map(|(&size, (a, b))| a * b.conj() * size as f64)
            .sum();
        sum / self.order() as f64
    }

    /// Row of the trivial representation (all ones).
    pub fn trivial_index(&self) -> Result<usize> {
        self.characters
            .iter()
            .position(|row| row.iter().all(|c| (c - Complex64::new(1.0, 0.0)).norm() < ORTHOGONALITY_TOLERANCE))
            .ok_or_else(|| Error::InvalidCharacterTable("no trivial representation".into()))
    }

    fn check_index(&self, rep: usize) -> Result<()> {
        if rep < self.irrep_count() {
            Ok(())
        } else {
            Err(Error::InvalidCharacterTable(format!(
                "representation index {rep} out of range (table has {})",
                self.irrep_count()
            )))
        }
    }
}

fn round_multiplicity(value: Complex64) -> Result<u64> {
    let r = value.re.round();
    if value.im.abs() > ROUNDING_TOLERANCE || (value.re - r).abs() > ROUNDING_TOLERANCE || r < 0.0 {
        return Err(Error::NonIntegral { value: value.re, tolerance: ROUNDING_TOLERANCE });
    }
    Ok(r as u64)
}

/// Multiplicity of irrep `i` in `χ_j · χ_D`.
fn tensor_multiplicity(table: &CharacterTable, i: usize, j: usize, rep: usize) -> Result<u64> {
    let sum: Complex64 = (0..table.class_sizes.len())
        .map(|c| {
            table.characters[j][c] * table.characters[rep][c] * table.characters[i][c].conj()
                * table.class_sizes[c] as f64
        })
        .sum();
    round_multiplicity(sum / table.order() as f64)
}

/// Fusion data of tensoring with irrep `rep`, on the irreducibles reachable
/// from the trivial one, which is ι. Sectors keep table order.
pub fn fusion_from_characters(table: &CharacterTable, rep: usize) -> Result<FusionData> {
    table.validate()?;
    table.check_index(rep)?;
    let s = table.irrep_count();
    let mut full = vec![vec![0i64; s]; s];
    for (i, row) in full.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = tensor_multiplicity(table, i, j, rep)? as i64;
        }
    }
    let trivial = table.trivial_index()?;
    let mut seen = vec![false; s];
    seen[trivial] = true;
    let mut queue = vec![trivial];
    while let Some(j) = queue.pop() {
        for i in 0..s {
            if full[i][j] > 0 && !seen[i] {
                seen[i] = true;
                queue.push(i);
            }
        }
    }
    let keep: Vec<usize> = (0..s).filter(|&i| seen[i]).collect();
    let matrix = keep.iter().map(|&i| keep.iter().map(|&j| full[i][j]).collect()).collect();
    let sectors = keep.iter().map(|&i| SectorLabel::new(table.irrep_names[i].clone())).collect();
    let iota = keep.iter().position(|&i| i == trivial).expect("trivial irrep kept");
    FusionData::new(sectors, iota, matrix)
}

/// Dimension of the `G`-invariants in `D^⊗n`: `(1/|G|) Σ_c |c| χ_D(c)ⁿ`.
pub fn invariant_dims(table: &CharacterTable, rep: usize, n: usize) -> Result<u64> {
    table.validate()?;
    table.check_index(rep)?;
    let sum: Complex64 = table
        .class_sizes
        .iter()
        .zip(&table.characters[rep])
        .map(|(&size, &chi)| chi.powu(n as u32) * size as f64)
        .sum();
    round_multiplicity(sum / table.order() as f64)
}

fn table(name: &str, sizes: &[u64], rows: &[(&str, Vec<Complex64>)]) -> CharacterTable {
    CharacterTable::new(
        name,
        sizes.to_vec(),
        rows.iter().map(|(_, r)| r.clone()).collect(),
        rows.iter().map(|(n, _)| n.to_string()).collect(),
    )
    .expect("built-in table is valid")
}

fn re(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

pub fn z2() -> CharacterTable {
    table("Z2", &[1, 1], &[("triv", re(&[1.0, 1.0])), ("sgn", re(&[1.0, -1.0]))])
}

pub fn z3() -> CharacterTable {
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let one = Complex64::new(1.0, 0.0);
    table(
        "Z3",
        &[1, 1, 1],
        &[("triv", vec![one; 3]), ("omega", vec![one, w, w * w]), ("omega2", vec![one, w * w, w])],
    )
}

/// Classes: identity, transpositions, 3-cycles.
pub fn s3() -> CharacterTable {
    table(
        "S3",
        &[1, 3, 2],
        &[("triv", re(&[1.0, 1.0, 1.0])), ("sgn", re(&[1.0, -1.0, 1.0])), ("std", re(&[2.0, 0.0, -1.0]))],
    )
}

pub fn builtin(name: &str) -> Option<CharacterTable> {
    match name {
        "Z2" => Some(z2()),
        "Z3" => Some(z3()),
        "S3" => Some(s3()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;

    use super::*;
    use crate::series::{h_series, k_from_h};

    #[test]
    fn s3_standard_fusion() {
        let t = s3();
        let f = fusion_from_characters(&t, 2).unwrap();
        let names: Vec<&str> = f.sectors.iter().map(SectorLabel::as_str).collect();
        assert_eq!(names, ["triv", "sgn", "std"]);
        assert_eq!(f.iota, 0);
        assert_eq!(f.matrix, vec![vec![0, 0, 1], vec![0, 0, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn sign_and_trivial_reps() {
        let f = fusion_from_characters(&z2(), 1).unwrap();
        assert_eq!(f.matrix, vec![vec![0, 1], vec![1, 0]]);
        for t in [z2(), z3(), s3()] {
            let triv = t.trivial_index().unwrap();
            let f = fusion_from_characters(&t, triv).unwrap();
            assert_eq!(f.matrix, vec![vec![1]]);
            assert_eq!(f.sectors[0].as_str(), "triv");
        }
        let f = fusion_from_characters(&s3(), 1).unwrap();
        assert_eq!(f.matrix, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn complex_rep_gives_cyclic_permutation() {
        let f = fusion_from_characters(&z3(), 1).unwrap();
        // triv → omega → omega2 → triv
        assert_eq!(f.matrix, vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn self_conjugate_reps_give_symmetric_matrices() {
        for (t, rep) in [(s3(), 2), (s3(), 1), (z2(), 1)] {
            let f = fusion_from_characters(&t, rep).unwrap();
            for i in 0..f.size() {
                for j in 0..f.size() {
                    assert_eq!(f.entry(i, j), f.entry(j, i));
                }
            }
        }
    }

    #[test]
    fn invariant_dimension_examples() {
        assert_eq!(invariant_dims(&s3(), 2, 4).unwrap(), 3);
        for t in [z2(), z3(), s3()] {
            for rep in 0..t.irrep_count() {
                assert_eq!(invariant_dims(&t, rep, 0).unwrap(), 1);
            }
        }
        // (2ⁿ + 2(−1)ⁿ)/6 for n ≥ 1
        for n in 1..=16u32 {
            let want = (2i64.pow(n) + 2 * (-1i64).pow(n)) / 6;
            assert_eq!(invariant_dims(&s3(), 2, n as usize).unwrap() as i64, want);
        }
    }

    #[test]
    fn h_matches_character_oracle() {
        for (t, rep) in [(s3(), 2), (s3(), 1), (z2(), 1), (z3(), 1), (z3(), 2)] {
            let f = fusion_from_characters(&t, rep).unwrap();
            let h = h_series(&f, 16).unwrap().integer_coefficients().unwrap();
            for (n, hn) in h.iter().enumerate() {
                assert_eq!(*hn, BigInt::from(invariant_dims(&t, rep, n).unwrap()), "{} rep {rep} n={n}", t.group_name);
            }
        }
    }

    #[test]
    fn s3_k_is_shifted_fibonacci() {
        let f = fusion_from_characters(&s3(), 2).unwrap();
        let k = k_from_h(&h_series(&f, 16).unwrap()).unwrap().integer_coefficients().unwrap();
        // t²/(1 − t − t²)
        let mut want = vec![0i64; 17];
        want[2] = 1;
        for n in 3..=16 {
            want[n] = want[n - 1] + want[n - 2];
        }
        assert_eq!(k, want.into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn corrupt_tables_rejected() {
        let mut t = s3();
        t.characters[2][2] = Complex64::new(-0.9, 0.0);
        assert!(matches!(t.validate(), Err(Error::InvalidCharacterTable(_))));
        assert!(matches!(fusion_from_characters(&t, 2), Err(Error::InvalidCharacterTable(_))));

        let mut t = s3();
        t.characters[2][0] = Complex64::new(2.5, 0.0);
        assert!(t.validate().is_err());

        let mut t = s3();
        t.class_sizes[1] = 0;
        assert!(t.validate().is_err());

        assert!(fusion_from_characters(&s3(), 3).is_err());
    }

    #[test]
    fn rounding_guard() {
        assert_eq!(round_multiplicity(Complex64::new(2.0 + 5e-7, 0.0)).unwrap(), 2);
        assert!(matches!(round_multiplicity(Complex64::new(0.5, 0.0)), Err(Error::NonIntegral { .. })));
        assert!(round_multiplicity(Complex64::new(-1.0, 0.0)).is_err());
    }
}
