//! Regression table of known values, run by `dihedral selftest`.

use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::cover::{double_cover_homology, linking_form, TorsionGroup};
use crate::linalg::snf;
use crate::obstruction::{
    cyclic_criterion, enumerate_isotropic, quotient_classes, seifert_criterion, surjective_characters, verdict,
    CharKnotClass, ScopeNote, DEFAULT_ENUM_CAP,
};
use crate::seifert::{connected_sum, stabilize_zero_framed, twist_knot, SeifertMatrix, SurfaceClass};
use crate::signature::{tristram_levine, twist_ribbon, twist_xi3, Precision, RibbonVerdict, RootOfUnity};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub expected: String,
    pub got: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.got
    }
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn knot_937() -> SeifertMatrix {
    SeifertMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, -2, 1], [-1, -1, 0, -1]]).expect("valid")
}

fn list<F: Fn(i64) -> bool>(f: F) -> String {
    join(&(-50..=50).filter(|&m| f(m)).collect::<Vec<_>>())
}

/// Search for `[[a,1],[0,b]]` with `|4ab − 1| = 81`.
pub fn cyclic81_matrix() -> Option<SeifertMatrix> {
    (-20..=20i64)
        .flat_map(|a| (-20..=20i64).map(move |b| (a, b)))
        .find(|&(a, b)| (4 * a * b - 1).abs() == 81)
        .map(|(a, b)| SeifertMatrix::from_rows(&[[a, 1], [0, b]]).expect("skew part is unimodular"))
}

pub fn run() -> Vec<Check> {
    let mut out = Vec::new();
    let mut check = |name, expected: String, got: String| out.push(Check { name, expected, got });

    let v = knot_937();
    let a = v.symmetrize();
    check("9_37 Smith form", "1,1,3,15".into(), join(&snf(&a).diagonal()));
    let g = TorsionGroup::with_generators(&a, vec![big(&[-1, -1, 0, 0]), big(&[-1, 0, 0, 0])]).expect("basis");
    check("9_37 torsion", "3,15".into(), join(g.invariant_factors()));
    let l = linking_form(&g);
    let lam: Vec<String> = l.lambda().iter().map(|r| format!("[{}]", join(r))).collect();
    check("9_37 linking matrix", "[2/3,1/3],[1/3,2/5]".into(), lam.join(","));
    let iso = enumerate_isotropic(&l, 3, DEFAULT_ENUM_CAP).unwrap_or_default();
    check("9_37 isotropic set", "(0,0) (0,5) (0,10) (1,5) (2,10)".into(), join(&iso).replace(",(", " ("));
    let classes = surjective_characters(&l, 3, DEFAULT_ENUM_CAP)
        .and_then(|c| quotient_classes(&l, &c))
        .unwrap_or_default();
    let ext = classes.iter().filter(|c| verdict(&l, c.representative()).extends).count();
    check("9_37 extendable classes at n=3", "2".into(), ext.to_string());

    let t = twist_knot(-1);
    let lt = linking_form(&double_cover_homology(&t));
    let tv = surjective_characters(&lt, 3, DEFAULT_ENUM_CAP)
        .ok()
        .and_then(|c| c.first().map(|c| verdict(&lt, c)));
    check(
        "trefoil obstructed in every scope",
        "false,true,true".into(),
        tv.map_or("none".into(), |v| {
            format!(
                "{},{},{}",
                v.extends,
                v.scope.contains(&ScopeNote::AlsoNonorientable),
                v.scope.contains(&ScopeNote::AlsoAnyAmbient4Manifold)
            )
        }),
    );

    check(
        "twist D3 quotients",
        list(|m| (m - 2).rem_euclid(3) == 0),
        list(|m| {
            let l = linking_form(&double_cover_homology(&twist_knot(m)));
            !surjective_characters(&l, 3, DEFAULT_ENUM_CAP).unwrap_or_default().is_empty()
        }),
    );
    check(
        "twist extendable",
        list(|m| (m - 2).rem_euclid(9) == 0),
        list(|m| {
            CharKnotClass::from_i64(&twist_knot(m), &[-1, 1], 3).is_ok_and(|b| seifert_criterion(&twist_knot(m), &b))
        }),
    );

    let z81 = cyclic81_matrix().map(|v| double_cover_homology(&v));
    check(
        "cyclic group of order 81",
        "true,true,false,false".into(),
        z81.map_or("none".into(), |g| {
            join(&[3, 9, 27, 81].map(|n| cyclic_criterion(&g, n).map_or("err".into(), |b| b.to_string())))
        }),
    );

    let k11 = twist_knot(11);
    let st = stabilize_zero_framed(&k11, &SurfaceClass::from_i64(&[-1, 1]), 3);
    check(
        "twist 11 zero-framed class",
        "-1,1,3,3,0,0,0,0,0,0 form 0".into(),
        st.map_or("error".into(), |s| {
            format!(
                "{} form {}",
                join(s.class.coords()),
                s.matrix.form_value(&s.class).map_or("error".into(), |x| x.to_string())
            )
        }),
    );

    let xi = |m| twist_xi3(m).ok().and_then(|x| x.candidates()).map_or("none".into(), |c| join(&c));
    check("Xi_3 of twist 2", "-1,1".into(), xi(2));
    check("Xi_3 of twist 11", "7,9".into(), xi(11));
    check(
        "twist ribbon verdicts",
        "2".into(),
        list(|m| twist_ribbon(m) == Ok(RibbonVerdict::ConsistentWithRibbon)),
    );

    let sig = |v: &SeifertMatrix| {
        tristram_levine(v, RootOfUnity::minus_one(), Precision::default()).map_or("error".into(), |s| s.to_string())
    };
    check("trefoil signature", "-2".into(), sig(&t));
    check("trefoil#trefoil signature", "-4".into(), sig(&connected_sum(&t, &t)));
    check("unknot signature", "0".into(), sig(&SeifertMatrix::unknot()));
    out
}

pub fn render_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut o = String::new();
    for c in checks {
        let _ = write!(o, "{} {:<width$}", if c.passed() { "PASS" } else { "FAIL" }, c.name);
        if !c.passed() {
            let _ = write!(o, "  expected {}  got {}", c.expected, c.got);
        }
        let _ = writeln!(o);
    }
    let passed = checks.iter().filter(|c| c.passed()).count();
    let _ = writeln!(o, "{passed}/{} checks passed", checks.len());
    o
}
