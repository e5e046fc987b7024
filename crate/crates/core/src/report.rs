//! The end-to-end analysis of one knot and its machine-readable report.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{double_cover_homology, linking_form, LinkingForm, TorsionGroup};
use crate::linalg::{snf, ResidueQZ};
use crate::modulus::{check_modulus, ModulusError};
use crate::obstruction::{
    char_class_orbits, characteristic_knot_classes, cyclic_criterion, enumerate_isotropic, form_value_mod_n2,
    quotient_classes, seifert_criterion, surjective_characters, verdict, zero_framed_exists, CharKnotClass,
    ObstructionError, ScopeNote, DEFAULT_ENUM_CAP,
};
use crate::seifert::{stabilize_zero_framed, twist_knot, SeifertMatrix, StabilizationSign, SurfaceClass};
use crate::signature::{ribbon_bound, ribbon_test, twist_xi3, xi_n, Precision, RibbonVerdict, SigmaW};

pub const SCHEMA: &str = "dihedral-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Conventions every report states explicitly.
pub const CONVENTIONS: &[&str] = &[
    "linking form lk(u,v) = u^T A^-1 v mod Z with A = V + V^T",
    "torsion generators are the columns of P^-1 past the unit block of the Smith form P A Q = D",
    "quotient_class_count counts surjective characters onto Z/n up to units; extendable_class_count counts those with vanishing self-linking",
    "characteristic classes are beta mod n with A beta = 0 mod n and gcd(beta, n) = 1, the condition for a primitive integral lift",
    "form values use the lift of beta with entries in [0, n)",
    "zero-framed stabilization adds four trivial tori; blocks carry +1 instead of -1 when the form value is negative",
    "Xi sign ambiguity is reported as a candidate set, never a single signed value",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotRecord {
    pub name: String,
    pub seifert: SeifertMatrix,
    pub source: String,
}

/// Inputs for the optional Ξₙ block.
#[derive(Debug, Clone, PartialEq)]
pub struct XiOptions {
    pub n: u64,
    pub beta: Vec<BigInt>,
    /// Seifert matrix of the curve `β` as a knot; the unknot when `β` is unknotted.
    pub v_beta: SeifertMatrix,
    pub sigma_w: SigmaW,
    pub rank_h1: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOptions {
    /// Explicit moduli; `None` picks every odd divisor `n > 1` of the determinant up to `n_max`.
    pub n_list: Option<Vec<u64>>,
    pub n_max: u64,
    pub enum_cap: u64,
    pub precision: Precision,
    pub xi: Option<XiOptions>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            n_list: None,
            n_max: 99,
            enum_cap: DEFAULT_ENUM_CAP,
            precision: Precision::default(),
            xi: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Modulus(#[from] ModulusError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rational {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for Rational {
    fn from(q: &BigRational) -> Self {
        Self {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl From<&ResidueQZ> for Rational {
    fn from(q: &ResidueQZ) -> Self {
        Self::from(q.value())
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == "1" {
            f.write_str(&self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub name: String,
    pub source: String,
    pub seifert: String,
    pub genus: usize,
    pub determinant: String,
    pub smith_diagonal: Vec<String>,
    pub torsion: Torsion,
    pub linking_form: Vec<Vec<Rational>>,
    pub blocks: Vec<NBlock>,
    pub xi: Option<XiBlock>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Torsion {
    pub invariant_factors: Vec<String>,
    pub generators: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NBlock {
    pub n: u64,
    /// Whether the character-level enumeration ran.
    pub enumerated: bool,
    pub enumeration_note: Option<String>,
    pub isotropic_count: Option<u64>,
    pub surjective_count: Option<u64>,
    pub quotient_class_count: Option<u64>,
    pub extendable_class_count: Option<u64>,
    pub classes: Vec<ClassEntry>,
    pub cyclic_criterion: Option<bool>,
    pub characteristic: CharSection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub representative: Vec<String>,
    pub size: u64,
    pub self_linking: Rational,
    pub extends: bool,
    pub scope: Vec<ScopeNote>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharSection {
    pub enumerated: bool,
    pub note: Option<String>,
    /// All classes, before identifying `β ~ uβ`.
    pub count: Option<u64>,
    pub orbits: Vec<CharOrbit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharOrbit {
    pub beta: Vec<String>,
    pub orbit_size: u64,
    pub form_value: String,
    pub form_mod_n2: String,
    pub criterion: bool,
    pub zero_framed: bool,
    pub stabilization: Option<StabilizationEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilizationEntry {
    pub sign: StabilizationSign,
    pub squares: Vec<String>,
    pub class: Vec<String>,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XiBlock {
    pub n: u64,
    pub beta: Vec<String>,
    pub v_beta: String,
    pub sigma_w: SigmaW,
    pub linking_term: Option<Rational>,
    pub signature_sum: Option<i64>,
    pub candidates: Option<Vec<Rational>>,
    pub low: Option<Rational>,
    pub high: Option<Rational>,
    pub rank_h1: Option<u64>,
    pub bound: Option<Rational>,
    pub ribbon: Option<RibbonVerdict>,
    pub error: Option<String>,
}

/// Odd `n > 1` dividing `det`, ascending, up to `n_max`.
pub fn default_moduli(det: &BigInt, n_max: u64) -> Vec<u64> {
    (3..=n_max)
        .step_by(2)
        .filter(|&n| det.is_multiple_of(&BigInt::from(n)))
        .collect()
}

fn not_enumerated(e: &ObstructionError) -> String {
    match e {
        ObstructionError::TooLarge { size, cap } => format!("not enumerated: {size} elements exceed the cap of {cap}"),
        other => format!("not enumerated: {other}"),
    }
}

fn character_block(l: &LinkingForm, n: u64, cap: u64) -> Result<(u64, u64, Vec<ClassEntry>), ObstructionError> {
    let iso = enumerate_isotropic(l, n, cap)?;
    let chars = surjective_characters(l, n, cap)?;
    let classes = quotient_classes(l, &chars)?;
    let entries = classes
        .iter()
        .map(|c| {
            let v = verdict(l, c.representative());
            ClassEntry {
                representative: strings(c.representative().element().coords()),
                size: c.len() as u64,
                self_linking: Rational::from(&v.self_linking),
                extends: v.extends,
                scope: v.scope,
            }
        })
        .collect();
    Ok((iso.len() as u64, chars.len() as u64, entries))
}

fn orbit_entry(v: &SeifertMatrix, orbit: &[CharKnotClass]) -> CharOrbit {
    let rep = &orbit[0];
    let lift = rep.lift();
    let value = v.form_value(&lift).expect("class length matches");
    let criterion = seifert_criterion(v, rep);
    let stabilization = criterion.then(|| {
        let s = stabilize_zero_framed(v, &lift, rep.n()).expect("criterion holds");
        StabilizationEntry {
            sign: s.sign,
            squares: s.squares.iter().map(ToString::to_string).collect(),
            class: strings(s.class.coords()),
            size: s.matrix.size(),
        }
    });
    CharOrbit {
        beta: strings(rep.beta()),
        orbit_size: orbit.len() as u64,
        form_value: value.to_string(),
        form_mod_n2: form_value_mod_n2(v, rep).to_string(),
        criterion,
        zero_framed: zero_framed_exists(v, rep),
        stabilization,
    }
}

fn char_section(v: &SeifertMatrix, n: u64, cap: u64) -> CharSection {
    match characteristic_knot_classes(v, n, cap) {
        Ok(classes) => CharSection {
            enumerated: true,
            note: None,
            count: Some(classes.len() as u64),
            orbits: char_class_orbits(&classes).iter().map(|o| orbit_entry(v, o)).collect(),
        },
        Err(e) => CharSection {
            enumerated: false,
            note: Some(not_enumerated(&e)),
            count: None,
            orbits: Vec::new(),
        },
    }
}

fn n_block(v: &SeifertMatrix, g: &TorsionGroup, l: &LinkingForm, n: u64, cap: u64) -> NBlock {
    let characteristic = char_section(v, n, cap);
    let cyclic = if g.is_cyclic() && g.order().is_multiple_of(&BigInt::from(n)) {
        cyclic_criterion(g, n).ok()
    } else {
        None
    };
    let char_counts = characteristic.enumerated.then(|| {
        let total = characteristic.orbits.len() as u64;
        let ext = characteristic.orbits.iter().filter(|o| o.criterion).count() as u64;
        (total, ext)
    });
    match character_block(l, n, cap) {
        Ok((iso, surj, classes)) => {
            let total = classes.len() as u64;
            let ext = classes.iter().filter(|c| c.extends).count() as u64;
            if let Some(cc) = char_counts {
                debug_assert_eq!(cc, (total, ext), "character and characteristic-class paths disagree");
            }
            NBlock {
                n,
                enumerated: true,
                enumeration_note: None,
                isotropic_count: Some(iso),
                surjective_count: Some(surj),
                quotient_class_count: Some(total),
                extendable_class_count: Some(ext),
                classes,
                cyclic_criterion: cyclic,
                characteristic,
            }
        }
        Err(e) => NBlock {
            n,
            enumerated: false,
            enumeration_note: Some(not_enumerated(&e)),
            isotropic_count: None,
            surjective_count: None,
            quotient_class_count: char_counts.map(|c| c.0),
            extendable_class_count: char_counts.map(|c| c.1),
            classes: Vec::new(),
            cyclic_criterion: cyclic,
            characteristic,
        },
    }
}

fn xi_block(v: &SeifertMatrix, x: &XiOptions, prec: Precision) -> XiBlock {
    let mut out = XiBlock {
        n: x.n,
        beta: strings(&x.beta),
        v_beta: x.v_beta.to_string(),
        sigma_w: x.sigma_w,
        linking_term: None,
        signature_sum: None,
        candidates: None,
        low: None,
        high: None,
        rank_h1: x.rank_h1,
        bound: None,
        ribbon: None,
        error: None,
    };
    let beta = SurfaceClass::new(x.beta.clone());
    match xi_n(v, &beta, &x.v_beta, x.n, x.sigma_w, prec) {
        Ok(xi) => {
            out.linking_term = Some(Rational::from(&xi.linking_term));
            out.signature_sum = Some(xi.signature_sum);
            out.candidates = xi.candidates().map(|c| c.iter().map(Rational::from).collect());
            out.low = Some(Rational::from(&xi.low));
            out.high = Some(Rational::from(&xi.high));
            if let Some(rank) = x.rank_h1 {
                out.bound = Some(Rational::from(&ribbon_bound(rank, x.n)));
                match ribbon_test(&xi, rank, x.n) {
                    Ok(r) => out.ribbon = Some(r),
                    Err(e) => out.error = Some(e.to_string()),
                }
            }
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

/// Steps 1 to 7 for every requested modulus.
pub fn analyze(record: &KnotRecord, opts: &AnalyzeOptions) -> Result<Report, AnalyzeError> {
    let v = &record.seifert;
    let det = v.knot_determinant();
    let moduli = match &opts.n_list {
        Some(ns) => {
            for &n in ns {
                check_modulus(n)?;
            }
            let mut ns = ns.clone();
            ns.sort_unstable();
            ns.dedup();
            ns
        }
        None => default_moduli(&det, opts.n_max),
    };
    let a = v.symmetrize();
    let s = snf(&a);
    let g = double_cover_homology(v);
    let l = linking_form(&g);
    let blocks = moduli.iter().map(|&n| n_block(v, &g, &l, n, opts.enum_cap)).collect();
    let xi = opts.xi.as_ref().map(|x| xi_block(v, x, opts.precision));
    Ok(Report {
        schema: SCHEMA.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        name: record.name.clone(),
        source: record.source.clone(),
        seifert: v.to_string(),
        genus: v.genus(),
        determinant: det.to_string(),
        smith_diagonal: strings(&s.diagonal()),
        torsion: Torsion {
            invariant_factors: strings(g.invariant_factors()),
            generators: g.generators().iter().map(|x| strings(x)).collect(),
        },
        linking_form: l
            .lambda()
            .iter()
            .map(|row| row.iter().map(Rational::from).collect())
            .collect(),
        blocks,
        xi,
        notes: CONVENTIONS.iter().map(ToString::to_string).collect(),
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Sum of extendable classes over all moduli.
    pub fn extendable_total(&self) -> u64 {
        self.blocks.iter().filter_map(|b| b.extendable_class_count).sum()
    }
}

fn tuple(xs: &[String]) -> String {
    format!("({})", xs.join(","))
}

/// Human-readable layout following the seven computation steps.
pub fn render_text(r: &Report) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "knot {}  (source: {})", r.name, r.source);
    let _ = writeln!(o, "  V = {}  genus {}  determinant {}", r.seifert, r.genus, r.determinant);
    let _ = writeln!(o, "Step 1  A = V + V^T");
    let _ = writeln!(o, "Step 2  Smith form diag({})", r.smith_diagonal.join(","));
    if r.torsion.invariant_factors.is_empty() {
        let _ = writeln!(o, "Step 3  H1 = 0");
    } else {
        let parts: Vec<String> = r.torsion.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        let _ = writeln!(o, "Step 3  H1 = {}", parts.join(" + "));
        for (i, l) in r.torsion.generators.iter().enumerate() {
            let _ = writeln!(o, "        l{} = {}", i + 1, tuple(l));
        }
    }
    let rows: Vec<String> = r
        .linking_form
        .iter()
        .map(|row| format!("[{}]", row.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    let _ = writeln!(o, "Step 4  linking form [{}]", rows.join(", "));
    if r.blocks.is_empty() {
        let _ = writeln!(o, "no dihedral quotients in range");
    }
    for b in &r.blocks {
        let _ = writeln!(o, "n = {}", b.n);
        match (&b.enumeration_note, b.isotropic_count, b.surjective_count) {
            (None, Some(iso), Some(surj)) => {
                let _ = writeln!(o, "Step 5  isotropic elements: {iso}");
                let _ = writeln!(o, "Step 6  surjective characters: {surj}");
            }
            (note, _, _) => {
                let _ = writeln!(o, "Step 5-6  {}", note.as_deref().unwrap_or("not enumerated"));
            }
        }
        let count = |x: Option<u64>| x.map_or_else(|| "?".to_string(), |v| v.to_string());
        let _ = writeln!(
            o,
            "Step 7  quotient classes: {}, extendable: {}",
            count(b.quotient_class_count),
            count(b.extendable_class_count)
        );
        for c in &b.classes {
            let scope: Vec<&str> = c.scope.iter().map(|s| s.label()).collect();
            let _ = writeln!(
                o,
                "        c = {}  size {}  lk(c,c) = {}  {}  [{}]",
                tuple(&c.representative),
                c.size,
                c.self_linking,
                if c.extends { "extends" } else { "obstructed" },
                scope.join(", ")
            );
        }
        if let Some(cc) = b.cyclic_criterion {
            let _ = writeln!(o, "        cyclic criterion (n^2 | |H1|): {cc}");
        }
        let ch = &b.characteristic;
        match &ch.note {
            Some(note) => {
                let _ = writeln!(o, "        characteristic classes: {note}");
            }
            None => {
                let _ = writeln!(o, "        characteristic classes: {} ({} up to units)", count(ch.count), ch.orbits.len());
            }
        }
        for orb in &ch.orbits {
            let _ = write!(
                o,
                "        beta = {}  form {} = {} mod n^2  {}",
                tuple(&orb.beta),
                orb.form_value,
                orb.form_mod_n2,
                if orb.criterion { "zero-framed" } else { "not zero-framed" }
            );
            if let Some(s) = &orb.stabilization {
                let _ = write!(o, "  stabilized to size {} with squares ({})", s.size, s.squares.join(","));
            }
            let _ = writeln!(o);
        }
    }
    if let Some(x) = &r.xi {
        let _ = writeln!(o, "Xi_{}  beta = {}  V_beta = {}", x.n, tuple(&x.beta), x.v_beta);
        if let Some(c) = &x.candidates {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            let _ = writeln!(o, "        candidates {{{}}}", parts.join(", "));
        } else if let (Some(lo), Some(hi)) = (&x.low, &x.high) {
            let _ = writeln!(o, "        interval [{lo}, {hi}]");
        }
        if let (Some(b), Some(rv)) = (&x.bound, x.ribbon) {
            let _ = writeln!(o, "        ribbon bound {b}: {}", ribbon_label(rv));
        }
        if let Some(e) = &x.error {
            let _ = writeln!(o, "        error: {e}");
        }
    }
    o
}

pub fn ribbon_label(r: RibbonVerdict) -> &'static str {
    match r {
        RibbonVerdict::ConsistentWithRibbon => "consistent-with-ribbon",
        RibbonVerdict::NotRibbon => "not-ribbon",
    }
}

/// One row of the twist-knot table at `n = 3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistRow {
    pub m: i64,
    pub determinant: String,
    /// A D₃ quotient exists (from the surjective characters).
    pub d3_quotient: bool,
    /// Verdict of the character pipeline.
    pub extends: Option<bool>,
    /// Verdict of the Seifert-form criterion on `β = (−1, 1)`.
    pub criterion_extends: Option<bool>,
    /// Both pipelines agree, on existence and on extension.
    pub agree: bool,
    pub xi3: Option<Vec<Rational>>,
    pub ribbon: Option<RibbonVerdict>,
}

pub fn twist_row(m: i64) -> TwistRow {
    let v = twist_knot(m);
    let l = linking_form(&double_cover_homology(&v));
    let chars = surjective_characters(&l, 3, DEFAULT_ENUM_CAP).expect("cyclic group of order |4m+1|");
    let d3 = !chars.is_empty();
    let extends = d3.then(|| chars.iter().any(|c| verdict(&l, c).extends));
    let beta = CharKnotClass::from_i64(&v, &[-1, 1], 3).ok();
    let criterion_extends = beta.as_ref().map(|b| seifert_criterion(&v, b));
    let agree = d3 == beta.is_some() && extends == criterion_extends;
    let (xi3, ribbon) = match twist_xi3(m) {
        Ok(x) => (
            x.candidates().map(|c| c.iter().map(Rational::from).collect()),
            ribbon_test(&x, 0, 3).ok(),
        ),
        Err(_) => (None, None),
    };
    TwistRow {
        m,
        determinant: v.knot_determinant().to_string(),
        d3_quotient: d3,
        extends,
        criterion_extends,
        agree,
        xi3,
        ribbon,
    }
}

pub fn twist_family(range: RangeInclusive<i64>) -> Vec<TwistRow> {
    range.map(twist_row).collect()
}

pub fn render_twist_text(rows: &[TwistRow]) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "{:>6}  {:>6}  {:>4}  {:>7}  {:>14}  {:<24}", "m", "det", "D3", "extends", "Xi_3", "ribbon");
    let yn = |b: Option<bool>| match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    };
    for r in rows {
        let xi = r.xi3.as_ref().map_or_else(
            || "-".to_string(),
            |c| format!("{{{}}}", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")),
        );
        let _ = writeln!(
            o,
            "{:>6}  {:>6}  {:>4}  {:>7}  {:>14}  {:<24}{}",
            r.m,
            r.determinant,
            yn(Some(r.d3_quotient)),
            yn(r.extends),
            xi,
            r.ribbon.map_or("-", ribbon_label),
            if r.agree { "" } else { "  DISAGREE" }
        );
    }
    o
}

/// Largest modulus for which a report block exists, if any.
pub fn max_block_modulus(r: &Report) -> Option<u64> {
    r.blocks.iter().map(|b| b.n).max()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(name: &str, v: SeifertMatrix) -> KnotRecord {
        KnotRecord {
            name: name.into(),
            seifert: v,
            source: "test".into(),
        }
    }

    fn v937() -> SeifertMatrix {
        SeifertMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, -2, 1], [-1, -1, 0, -1]]).unwrap()
    }

    #[test]
    fn report_937() {
        let opts = AnalyzeOptions {
            n_list: Some(vec![3]),
            ..Default::default()
        };
        let r = analyze(&record("9_37", v937()), &opts).unwrap();
        assert_eq!(r.determinant, "45");
        assert_eq!(r.smith_diagonal, vec!["1", "1", "3", "15"]);
        let b = &r.blocks[0];
        assert_eq!(b.isotropic_count, Some(5));
        assert_eq!(b.surjective_count, Some(8));
        assert_eq!(b.quotient_class_count, Some(4));
        assert_eq!(b.extendable_class_count, Some(2));
        assert_eq!(b.characteristic.orbits.len(), 4);
        assert_eq!(b.characteristic.orbits.iter().filter(|o| o.criterion).count(), 2);
        assert_eq!(b.cyclic_criterion, None);
    }

    #[test]
    fn auto_moduli() {
        let r = analyze(&record("3_1", twist_knot(-1)), &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.blocks.len(), 1);
        assert_eq!(r.blocks[0].n, 3);
        assert_eq!(r.blocks[0].quotient_class_count, Some(1));
        assert_eq!(r.blocks[0].extendable_class_count, Some(0));
        assert!(r.blocks[0].classes[0].scope.contains(&ScopeNote::ObstructsAllIf3DividesN));
        let u = analyze(&record("0_1", SeifertMatrix::unknot()), &AnalyzeOptions::default()).unwrap();
        assert!(u.blocks.is_empty());
        let m2 = analyze(&record("6_1", twist_knot(2)), &AnalyzeOptions::default()).unwrap();
        assert_eq!(m2.blocks.iter().map(|b| b.n).collect::<Vec<_>>(), vec![3, 9]);
        assert_eq!(m2.extendable_total(), 1);
        assert_eq!(default_moduli(&BigInt::from(81), 99), vec![3, 9, 27, 81]);
        assert_eq!(default_moduli(&BigInt::from(81), 30), vec![3, 9, 27]);
    }

    #[test]
    fn bad_modulus_is_an_error() {
        let opts = AnalyzeOptions {
            n_list: Some(vec![4]),
            ..Default::default()
        };
        assert_eq!(
            analyze(&record("x", twist_knot(2)), &opts),
            Err(AnalyzeError::Modulus(ModulusError::Even(4)))
        );
    }

    #[test]
    fn cap_marks_blocks_not_enumerated() {
        let opts = AnalyzeOptions {
            n_list: Some(vec![3]),
            enum_cap: 10,
            ..Default::default()
        };
        let r = analyze(&record("9_37", v937()), &opts).unwrap();
        let b = &r.blocks[0];
        assert!(!b.enumerated);
        assert!(b.enumeration_note.as_deref().unwrap().starts_with("not enumerated"));
        // the characteristic path still supplies the counts
        assert_eq!(b.quotient_class_count, Some(4));
        assert_eq!(b.extendable_class_count, Some(2));
    }

    #[test]
    fn json_is_deterministic_and_strict() {
        let opts = AnalyzeOptions {
            xi: Some(XiOptions {
                n: 3,
                beta: vec![BigInt::from(-1), BigInt::from(1)],
                v_beta: SeifertMatrix::unknot(),
                sigma_w: SigmaW::PlusMinus(1),
                rank_h1: Some(0),
            }),
            ..Default::default()
        };
        let r = analyze(&record("K11", twist_knot(11)), &opts).unwrap();
        let a = r.to_json();
        let b = analyze(&record("K11", twist_knot(11)), &opts).unwrap().to_json();
        assert_eq!(a, b);
        let back: Report = serde_json::from_str(&a).unwrap();
        assert_eq!(back, r);
        let x = r.xi.as_ref().unwrap();
        assert_eq!(x.ribbon, Some(RibbonVerdict::NotRibbon));
        assert_eq!(
            x.candidates.as_ref().unwrap().iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["7", "9"]
        );
        let mut v: serde_json::Value = serde_json::from_str(&a).unwrap();
        v["unexpected"] = serde_json::Value::Bool(true);
        assert!(serde_json::from_value::<Report>(v).is_err());
        assert!(a.starts_with("{\"schema\":\"dihedral-report/1\""));
    }

    #[test]
    fn text_layout() {
        let opts = AnalyzeOptions {
            n_list: Some(vec![3]),
            ..Default::default()
        };
        let t = render_text(&analyze(&record("9_37", v937()), &opts).unwrap());
        for needle in ["Step 2  Smith form diag(1,1,3,15)", "H1 = Z/3 + Z/15", "Step 5  isotropic elements: 5", "quotient classes: 4, extendable: 2"] {
            assert!(t.contains(needle), "missing {needle:?} in\n{t}");
        }
    }

    #[test]
    fn twist_rows() {
        let rows = twist_family(-1..=2);
        assert!(rows.iter().all(|r| r.agree));
        assert!(rows[0].d3_quotient && rows[0].extends == Some(false));
        assert!(!rows[1].d3_quotient);
        let r2 = &rows[3];
        assert_eq!(r2.extends, Some(true));
        assert_eq!(r2.ribbon, Some(RibbonVerdict::ConsistentWithRibbon));
        let r11 = twist_row(11);
        assert_eq!(r11.extends, Some(true));
        assert_eq!(r11.ribbon, Some(RibbonVerdict::NotRibbon));
        assert!(render_twist_text(&rows).contains("consistent-with-ribbon"));
    }
}
