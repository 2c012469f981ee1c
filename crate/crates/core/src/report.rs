//! Full analysis of one input document, with a self-check suite.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::error::Result;
use crate::fusion::FusionData;
use crate::groups::invariant_dims;
use crate::input::{echo, Body, InputDocument};
use crate::pathalg::{PathModel, DEFAULT_MAX_PATHS, DEFAULT_MAX_PATH_LEN};
use crate::series::{h_series, k_direct, k_from_h, DimensionProfile, SkeletonDim, DEFAULT_ORDER};
use crate::spectral::{
    classify, dimension_bounds, lemma41_partial_sums, Classification, SpectralProfile, SupportSums,
    DEFAULT_TOLERANCE,
};

/// Largest path length used by the path-count spot checks.
pub const PATH_CHECK_LEN: usize = 6;
/// Acceptable Perron residual.
pub const PERRON_RESIDUAL_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub order: usize,
    pub tolerance: f64,
    pub max_path_len: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { order: DEFAULT_ORDER, tolerance: DEFAULT_TOLERANCE, max_path_len: DEFAULT_MAX_PATH_LEN }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Verification {
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, pass: bool, residual: f64, detail: impl Into<String>) {
        self.checks.push(Check { name, pass, residual, detail: detail.into() });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub input: InputDocument,
    pub fusion: FusionData,
    pub order: usize,
    /// `h_0..=h_M`.
    pub h_coeffs: Vec<BigInt>,
    /// `k_1..=k_M`.
    pub k_coeffs: Vec<BigInt>,
    /// `k_1..=k_M` via series inversion of `h`.
    pub k_from_series: Vec<BigInt>,
    pub spectral: SpectralProfile,
    pub skeleton_dim: SkeletonDim,
    pub lemma41_partial_sums: SupportSums,
    pub verification: Verification,
}

struct Computed {
    fusion: FusionData,
    spectral: SpectralProfile,
    dims: DimensionProfile,
    k_from_series: Vec<BigInt>,
    sums: SupportSums,
}

fn compute(doc: &InputDocument, opts: &AnalysisOptions) -> Result<Computed> {
    let fusion = doc.fusion()?;
    fusion.ensure_valid()?;
    let spectral = classify(&fusion, opts.tolerance)?;
    let dims = DimensionProfile::build(&fusion, opts.order, &spectral)?;
    let k_series = k_from_h(&h_series(&fusion, opts.order)?)?;
    let k_from_series = k_series
        .integer_coefficients()
        .expect("k has integer coefficients")
        .into_iter()
        .skip(1)
        .collect();
    let sums = lemma41_partial_sums(&fusion, &spectral, opts.order)?;
    Ok(Computed { fusion, spectral, dims, k_from_series, sums })
}

fn run_checks(doc: &InputDocument, c: &Computed, opts: &AnalysisOptions) -> Result<Verification> {
    let mut v = Verification::default();

    let mismatches = c.dims.k_dims.iter().zip(&c.k_from_series).filter(|(a, b)| a != b).count();
    v.push(
        "series_oracle",
        mismatches == 0 && c.dims.k_dims.len() == c.k_from_series.len(),
        mismatches as f64,
        format!("k_n by series inversion vs first-return count, n = 1..={}", opts.order),
    );

    v.push(
        "perron_residual",
        c.spectral.residual <= PERRON_RESIDUAL_LIMIT,
        c.spectral.residual,
        format!("|N^T F - d F| / |F| <= {PERRON_RESIDUAL_LIMIT:e}"),
    );

    let s = &c.sums;
    let gap = 1.0 - s.last();
    let tail_ok = s.tail_bounds.last().is_none_or(|&b| gap <= b + 1e-12);
    v.push(
        "lemma41_sums",
        s.monotone && s.bounded && tail_ok,
        gap,
        format!(
            "partial sums monotone {}, bounded by 1 {}, 1 - S_{} within tail bound {}",
            s.monotone,
            s.bounded,
            opts.order,
            tail_ok
        ),
    );

    let model = PathModel::new(&c.fusion)?.with_limits(opts.max_path_len, DEFAULT_MAX_PATHS);
    let powers = c.fusion.int_matrix();
    let mut bad = 0usize;
    let mut checked = 0usize;
    'lengths: for n in 0..=PATH_CHECK_LEN.min(opts.max_path_len) {
        let p = powers.pow(n);
        for j in 0..c.fusion.size() {
            let Ok(paths) = model.enumerate_paths(n, j) else {
                break 'lengths;
            };
            if BigInt::from(paths.len()) != *p.get(j, c.fusion.iota) {
                bad += 1;
            }
        }
        if n >= 1 {
            let Ok(loops) = model.first_return_basis(n) else {
                break 'lengths;
            };
            if BigInt::from(loops.len()) != k_direct(&c.fusion, n)? {
                bad += 1;
            }
        }
        checked = n;
    }
    v.push(
        "path_counts",
        bad == 0,
        bad as f64,
        format!("path and first-return counts vs matrix powers, n = 0..={checked}"),
    );

    let classification_ok = match c.spectral.classification {
        Classification::Exceptional => c.dims.skeleton_dim.is_finite(),
        Classification::Generic => !c.dims.skeleton_dim.is_finite(),
    };
    v.push(
        "consistency",
        classification_ok,
        if classification_ok { 0.0 } else { 1.0 },
        "classification agrees with skeleton finiteness",
    );

    let k1 = u64::try_from(k_direct(&c.fusion, 1)?).unwrap_or(u64::MAX);
    let bounds = dimension_bounds(k1, c.spectral.d_rho, &c.dims.skeleton_dim, 1e-9);
    v.push(
        "dimension_bounds",
        bounds.lower_holds && bounds.upper_holds,
        0.0,
        "dim k_1 <= d_rho <= dim K",
    );

    if let Body::CharacterTable { table, rep } = &doc.body {
        let index = table.index_of(rep).expect("validated rep");
        let mut bad = 0usize;
        for (n, h) in c.dims.h_dims.iter().enumerate() {
            if BigInt::from(invariant_dims(table, index, n)?) != *h {
                bad += 1;
            }
        }
        v.push(
            "character_oracle",
            bad == 0,
            bad as f64,
            format!("h_n vs invariant counts from characters, n = 0..={}", opts.order),
        );
    }
    Ok(v)
}

/// Runs every computation and the check suite.
pub fn analyze(doc: &InputDocument, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let c = compute(doc, opts)?;
    let verification = run_checks(doc, &c, opts)?;
    Ok(AnalysisReport {
        input: doc.clone(),
        order: opts.order,
        h_coeffs: c.dims.h_dims,
        k_coeffs: c.dims.k_dims,
        k_from_series: c.k_from_series,
        skeleton_dim: c.dims.skeleton_dim,
        fusion: c.fusion,
        spectral: c.spectral,
        lemma41_partial_sums: c.sums,
        verification,
    })
}

/// The check suite alone.
pub fn verify(doc: &InputDocument, opts: &AnalysisOptions) -> Result<Verification> {
    let c = compute(doc, opts)?;
    run_checks(doc, &c, opts)
}

impl AnalysisReport {
    /// Classification agrees with skeleton finiteness and both `k` routes agree.
    pub fn is_consistent(&self) -> bool {
        let finite = self.spectral.classification == Classification::Exceptional;
        finite == self.skeleton_dim.is_finite()
            && self.k_coeffs == self.k_from_series
            && self.h_coeffs.len() == self.order + 1
            && self.k_coeffs.len() == self.order
    }

    pub fn to_json(&self) -> Value {
        let sp = &self.spectral;
        let mut dims = Map::new();
        for (i, label) in self.fusion.sectors.iter().enumerate() {
            dims.insert(label.to_string(), float(sp.frobenius(i)));
        }
        let sums = &self.lemma41_partial_sums;
        json!({
            "input": echo(&self.input),
            "h_coeffs": self.h_coeffs.iter().map(integer).collect::<Vec<_>>(),
            "k_coeffs": self.k_coeffs.iter().map(integer).collect::<Vec<_>>(),
            "d_rho": float(sp.d_rho),
            "quantum_dims": dims,
            "classification": sp.classification.to_string(),
            "nilpotency_index": sp.nilpotency_index,
            "skeleton_dim": match &self.skeleton_dim {
                SkeletonDim::Finite(n) => integer(n),
                SkeletonDim::Infinite => Value::String("infinite".into()),
            },
            "kms_temperature": sp.kms_temperature.map_or(Value::Null, float),
            "reduced_radius": float(sp.reduced_radius),
            "reduced_opnorm": float(sp.reduced_opnorm),
            "decay_rate": float(sp.decay_rate),
            "lemma41_partial_sums": {
                "sums": sums.sums.iter().copied().map(float).collect::<Vec<_>>(),
                "tail_bound": {
                    "constant": float(sums.constant),
                    "rate": float(sums.rate),
                    "final": sums.tail_bounds.last().copied().map_or(Value::Null, float),
                },
                "monotone": sums.monotone,
                "bounded": sums.bounded,
            },
            "verification": {
                "pass": self.verification.pass(),
                "checks": self.verification.checks.iter().map(|c| json!({
                    "name": c.name,
                    "pass": c.pass,
                    "residual": float(c.residual),
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
            },
        })
    }

    pub fn to_machine(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }
}

fn integer(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integer literal"))
}

/// 15 significant digits; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(format_sig(x).parse::<Number>().expect("float literal"))
}

pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("exponent");
    if (-5..15).contains(&exp) {
        format!("{x:.*}", (14 - exp) as usize)
    } else {
        sci
    }
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = &self.spectral;
        let mut out = String::new();
        let _ = writeln!(out, "input           {} ({})", self.input.name, self.input.kind());
        let labels: Vec<&str> = self.fusion.sectors.iter().map(|s| s.as_str()).collect();
        let _ = writeln!(out, "sectors         {} (iota = {})", labels.join(", "), labels[self.fusion.iota]);
        let _ = writeln!(out, "matrix          {:?}", self.fusion.matrix);
        let _ = writeln!(out, "classification  {}", sp.classification);
        let nil = sp.nilpotency_index.map_or("none".to_string(), |m| m.to_string());
        let _ = writeln!(out, "nilpotency      {nil}");
        let _ = writeln!(out, "skeleton dim    {}", self.skeleton_dim);
        let _ = writeln!(out, "d_rho           {}", format_sig(sp.d_rho));
        for (i, l) in labels.iter().enumerate() {
            let _ = writeln!(out, "  d({l}){:w$}{}", "", format_sig(sp.frobenius(i)), w = 12usize.saturating_sub(l.len()));
        }
        let kms = sp.kms_temperature.map_or("none (d_rho = 1)".to_string(), format_sig);
        let _ = writeln!(out, "kms beta        {kms}");
        let _ = writeln!(out, "reduced radius  {}", format_sig(sp.reduced_radius));
        let _ = writeln!(out, "reduced norm    {}", format_sig(sp.reduced_opnorm));
        let _ = writeln!(out, "decay rate      {}", format_sig(sp.decay_rate));
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>4}  {:>24}  {:>24}  {:>18}", "n", "dim h_n", "dim k_n", "S_n");
        for n in 0..=self.order {
            let k = if n == 0 { "-".to_string() } else { self.k_coeffs[n - 1].to_string() };
            let s = if n == 0 {
                "-".to_string()
            } else {
                format!("{:.15}", self.lemma41_partial_sums.sums[n - 1])
            };
            let _ = writeln!(out, "{n:>4}  {:>24}  {k:>24}  {s:>18}", self.h_coeffs[n].to_string());
        }
        let sums = &self.lemma41_partial_sums;
        let _ = writeln!(
            out,
            "tail bound      1 - S_n <= {} * {}^n",
            format_sig(sums.constant),
            format_sig(sums.rate)
        );
        let _ = writeln!(out);
        let _ = writeln!(out, "verification    {}", if self.verification.pass() { "PASS" } else { "FAIL" });
        for c in &self.verification.checks {
            let _ = writeln!(
                out,
                "  {:<18} {}  residual {:<10.3e} {}",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.residual,
                c.detail
            );
        }
        f.write_str(&out)
    }
}
