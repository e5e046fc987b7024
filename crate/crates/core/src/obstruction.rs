//! Dihedral quotients as `ℤₙ`-valued characters, their classes under
//! `Aut(ℤₙ)`, and the extension criteria.
//!
//! A surjection `H₁(Σ₂K) → ℤₙ` is `x ↦ lk(c, x)` for a unique `c` of order `n`.
//! It extends over an orientable surface in `B⁴` iff `lk(c, c) = 0`, iff a
//! mod-`n` characteristic class `β` with `c = [Aβ/n]` has `βᵀAβ ≡ 0 (mod n²)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cover::{CoverError, GroupElement, LinkingForm, TorsionGroup};
use crate::linalg::{snf, IntMatrix, ResidueQZ};
use crate::modulus::{check_modulus, units, ModulusError};
use crate::seifert::{SeifertMatrix, SurfaceClass};

pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "DIHEDRAL_ENUM_CAP";

/// The enumeration cap from the environment, or the default.
pub fn enum_cap_from_env() -> u64 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error(transparent)]
    Modulus(#[from] ModulusError),
    #[error("enumeration of {size} elements exceeds the cap of {cap}")]
    TooLarge { size: BigInt, cap: u64 },
    #[error("cyclic criterion needs a cyclic group, this one has rank {0}")]
    NotCyclic(usize),
    #[error("{n} does not divide the group order {order}; there is no quotient")]
    NoQuotient { n: u64, order: BigInt },
    #[error("characters with different moduli cannot be classed together")]
    MixedModuli,
    #[error("class has length {got}, expected {expected}")]
    ClassLength { expected: usize, got: usize },
    #[error("(V+V^T)·beta is not 0 mod {0}")]
    NotCharacteristic(u64),
    #[error("gcd of the class entries and {0} is not 1")]
    NotUnital(u64),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// The homomorphism `x ↦ lk(c, x)` into `⟨1/n⟩ ⊂ ℚ/ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    c: GroupElement,
    n: u64,
    values: Vec<ResidueQZ>,
}

impl Character {
    pub fn new(l: &LinkingForm, c: GroupElement, n: u64) -> Result<Self, ObstructionError> {
        check_modulus(n)?;
        let g = l.group();
        if c.rank() != g.rank() {
            return Err(CoverError::CoordinateCount {
                expected: g.rank(),
                got: c.rank(),
            }
            .into());
        }
        let values = l.character_values(&c);
        Ok(Self { c, n, values })
    }

    pub fn element(&self) -> &GroupElement {
        &self.c
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(ρ(ℓ₁), …, ρ(ℓ_r))`.
    pub fn values(&self) -> &[ResidueQZ] {
        &self.values
    }

    /// Order of the image subgroup.
    pub fn image_order(&self) -> BigInt {
        self.values
            .iter()
            .fold(BigInt::from(1), |acc, v| acc.lcm(&v.order()))
    }

    /// Whether the image is all of `⟨1/n⟩`.
    pub fn is_surjective(&self) -> bool {
        self.image_order() == BigInt::from(self.n)
    }

    pub fn apply(&self, x: &GroupElement) -> ResidueQZ {
        x.coords()
            .iter()
            .zip(&self.values)
            .map(|(xi, v)| v.scale(xi))
            .sum()
    }
}

/// Where a verdict applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ScopeNote {
    /// Orientable locally flat surfaces in `B⁴`.
    #[serde(rename = "orientable-B4")]
    OrientableB4,
    /// The same verdict for non-orientable surfaces.
    #[serde(rename = "also-nonorientable")]
    AlsoNonorientable,
    /// The same verdict in any oriented 4-manifold with `S³` boundary.
    #[serde(rename = "also-any-ambient-4-manifold")]
    AlsoAnyAmbient4Manifold,
    /// With `3 | n` a negative verdict also obstructs every variant above at once.
    #[serde(rename = "obstructs-all-if-3-divides-n")]
    ObstructsAllIf3DividesN,
}

impl ScopeNote {
    pub fn label(self) -> &'static str {
        match self {
            Self::OrientableB4 => "orientable-B4",
            Self::AlsoNonorientable => "also-nonorientable",
            Self::AlsoAnyAmbient4Manifold => "also-any-ambient-4-manifold",
            Self::ObstructsAllIf3DividesN => "obstructs-all-if-3-divides-n",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionVerdict {
    pub extends: bool,
    pub self_linking: ResidueQZ,
    pub surjective: bool,
    pub scope: Vec<ScopeNote>,
}

fn scope_for(extends: bool, n: u64) -> Vec<ScopeNote> {
    let mut s = vec![
        ScopeNote::OrientableB4,
        ScopeNote::AlsoNonorientable,
        ScopeNote::AlsoAnyAmbient4Manifold,
    ];
    if !extends && n.is_multiple_of(3) {
        s.push(ScopeNote::ObstructsAllIf3DividesN);
    }
    s
}

/// Extends iff `lk(c, c) = 0`.
pub fn verdict(l: &LinkingForm, ch: &Character) -> ExtensionVerdict {
    let self_linking = l.pair(ch.element(), ch.element());
    let extends = self_linking.is_zero();
    ExtensionVerdict {
        extends,
        self_linking,
        surjective: ch.is_surjective(),
        scope: scope_for(extends, ch.n()),
    }
}

/// A `(ℤₙ)ˣ`-orbit of characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientClass {
    n: u64,
    members: Vec<Character>,
}

impl QuotientClass {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Members ordered by their group element, lexicographically.
    pub fn members(&self) -> &[Character] {
        &self.members
    }

    /// The lexicographically smallest member.
    pub fn representative(&self) -> &Character {
        &self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

// Mixed-radix walk over the whole group in lexicographic order, handing each
// element to `f` with `t = N·(character values)` and `s = N·lk(c,c)`, both mod N.
fn walk_group<F>(l: &LinkingForm, cap: u64, mut f: F) -> Result<(), ObstructionError>
where
    F: FnMut(&[u64], &[u64], u64),
{
    let g = l.group();
    let order = g.order();
    if order > BigInt::from(cap) {
        return Err(ObstructionError::TooLarge { size: order, cap });
    }
    let (big_n, lambda) = l.scaled();
    let n = big_n.to_u64().expect("exponent at most the group order");
    let lam: Vec<Vec<u128>> = lambda
        .iter()
        .map(|row| row.iter().map(|x| x.to_u64().expect("reduced mod N") as u128).collect())
        .collect();
    let d: Vec<u64> = g
        .invariant_factors()
        .iter()
        .map(|x| x.to_u64().expect("factor at most the group order"))
        .collect();
    let r = d.len();
    let nn = n as u128;
    let mut x = vec![0u64; r];
    let mut t = vec![0u64; r];
    loop {
        for (j, tj) in t.iter_mut().enumerate() {
            let mut acc = 0u128;
            for i in 0..r {
                acc = (acc + x[i] as u128 * lam[i][j]) % nn;
            }
            *tj = acc as u64;
        }
        let s = x
            .iter()
            .zip(&t)
            .fold(0u128, |acc, (&xi, &ti)| (acc + xi as u128 * ti as u128) % nn) as u64;
        f(&x, &t, s);
        // increment, last coordinate fastest
        let mut k = r;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            x[k] += 1;
            if x[k] < d[k] {
                break;
            }
            x[k] = 0;
        }
    }
}

fn to_element(g: &TorsionGroup, x: &[u64]) -> GroupElement {
    let c: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    g.element(&c).expect("rank matches")
}

/// Step 5: every `c` with `lk(c, c) = 0`, including 0, in lexicographic order.
pub fn enumerate_isotropic(l: &LinkingForm, n: u64, cap: u64) -> Result<Vec<GroupElement>, ObstructionError> {
    check_modulus(n)?;
    let mut out = Vec::new();
    walk_group(l, cap, |x, _, s| {
        if s == 0 {
            out.push(to_element(l.group(), x));
        }
    })?;
    Ok(out)
}

/// Step 6: every character whose image is exactly `⟨1/n⟩`, in lexicographic order of `c`.
pub fn surjective_characters(l: &LinkingForm, n: u64, cap: u64) -> Result<Vec<Character>, ObstructionError> {
    check_modulus(n)?;
    let g = l.group();
    if !g.order().is_multiple_of(&BigInt::from(n)) {
        return Ok(Vec::new());
    }
    let big_n = g.exponent().to_u64().unwrap_or(u64::MAX);
    let mut hits = Vec::new();
    walk_group(l, cap, |x, t, _| {
        let gcd = t.iter().fold(big_n, |acc, &v| num_integer::gcd(acc, v));
        if big_n / gcd == n {
            hits.push(to_element(g, x));
        }
    })?;
    hits.into_iter().map(|c| Character::new(l, c, n)).collect()
}

/// Step 7: partition by `c ~ u·c` for `u ∈ (ℤₙ)ˣ`, classes ordered by representative.
pub fn quotient_classes(l: &LinkingForm, chars: &[Character]) -> Result<Vec<QuotientClass>, ObstructionError> {
    let Some(first) = chars.first() else {
        return Ok(Vec::new());
    };
    let n = first.n();
    if chars.iter().any(|c| c.n() != n) {
        return Err(ObstructionError::MixedModuli);
    }
    let g = l.group();
    let us = units(n);
    let mut remaining: BTreeSet<GroupElement> = chars.iter().map(|c| c.element().clone()).collect();
    let by_elem: std::collections::BTreeMap<GroupElement, &Character> =
        chars.iter().map(|c| (c.element().clone(), c)).collect();
    let mut classes = Vec::new();
    while let Some(rep) = remaining.pop_first() {
        let mut orbit: BTreeSet<GroupElement> = BTreeSet::new();
        orbit.insert(rep.clone());
        for &u in &us {
            orbit.insert(g.scale(&rep, &BigInt::from(u)));
        }
        let mut members = Vec::with_capacity(orbit.len());
        for e in orbit {
            remaining.remove(&e);
            match by_elem.get(&e) {
                Some(c) => members.push((*c).clone()),
                None => members.push(Character::new(l, e, n)?),
            }
        }
        classes.push(QuotientClass { n, members });
    }
    Ok(classes)
}

/// A mod-`n` characteristic class: `β ∈ (ℤₙ)^{2g}` with `(V+Vᵀ)β ≡ 0 (mod n)`
/// and `gcd(β, n) = 1`, the condition for a primitive integral lift.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CharKnotClass {
    beta: Vec<BigInt>,
    n: u64,
}

impl CharKnotClass {
    pub fn new(v: &SeifertMatrix, beta: &[BigInt], n: u64) -> Result<Self, ObstructionError> {
        check_modulus(n)?;
        if beta.len() != v.size() {
            return Err(ObstructionError::ClassLength {
                expected: v.size(),
                got: beta.len(),
            });
        }
        let nb = BigInt::from(n);
        let beta: Vec<BigInt> = beta.iter().map(|x| x.mod_floor(&nb)).collect();
        let a = v.symmetrize();
        let ab = a.mul_vec(&beta).map_err(CoverError::from)?;
        if ab.iter().any(|x| !x.is_multiple_of(&nb)) {
            return Err(ObstructionError::NotCharacteristic(n));
        }
        if !beta.iter().fold(nb.clone(), |acc, x| acc.gcd(x)).eq(&BigInt::from(1)) {
            return Err(ObstructionError::NotUnital(n));
        }
        Ok(Self { beta, n })
    }

    pub fn from_i64(v: &SeifertMatrix, beta: &[i64], n: u64) -> Result<Self, ObstructionError> {
        let b: Vec<BigInt> = beta.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(v, &b, n)
    }

    /// Entries in `[0, n)`.
    pub fn beta(&self) -> &[BigInt] {
        &self.beta
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The entry-wise lift in `[0, n)` as a surface class.
    pub fn lift(&self) -> SurfaceClass {
        SurfaceClass::new(self.beta.clone())
    }

    pub fn scale(&self, u: u64) -> Self {
        let nb = BigInt::from(self.n);
        Self {
            beta: self.beta.iter().map(|x| (x * u).mod_floor(&nb)).collect(),
            n: self.n,
        }
    }
}

/// Every mod-`n` characteristic class of `V`, in lexicographic order.
///
/// With `P·A·Q = D`, `Aβ ≡ 0 (mod n)` iff `y = Q⁻¹β` has `dⱼ·yⱼ ≡ 0 (mod n)`,
/// so the kernel is `Q` applied to the box of multiples of `n / gcd(dⱼ, n)`.
pub fn characteristic_knot_classes(
    v: &SeifertMatrix,
    n: u64,
    cap: u64,
) -> Result<Vec<CharKnotClass>, ObstructionError> {
    check_modulus(n)?;
    let a = v.symmetrize();
    let s = snf(&a);
    let m = a.rows();
    let nb = BigInt::from(n);
    let diag = s.diagonal();
    // step and count of each kernel coordinate
    let steps: Vec<(u64, u64)> = (0..m)
        .map(|j| {
            let g = diag[j].gcd(&nb).to_u64().expect("divides n");
            (n / g, g)
        })
        .collect();
    let size: BigInt = steps.iter().map(|&(_, g)| BigInt::from(g)).product();
    if size > BigInt::from(cap) {
        return Err(ObstructionError::TooLarge { size, cap });
    }
    let q = s.q();
    let mut out = BTreeSet::new();
    let mut idx = vec![0u64; m];
    loop {
        let y: Vec<BigInt> = idx.iter().zip(&steps).map(|(&i, &(st, _))| BigInt::from(i * st)).collect();
        let beta: Vec<BigInt> = q
            .mul_vec(&y)
            .expect("dimensions match")
            .iter()
            .map(|x| x.mod_floor(&nb))
            .collect();
        if beta.iter().fold(nb.clone(), |acc, x| acc.gcd(x)) == BigInt::from(1) {
            out.insert(CharKnotClass { beta, n });
        }
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out.into_iter().collect());
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < steps[k].1 {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Characteristic classes up to `β ~ uβ`, each orbit listed by its smallest member.
pub fn char_class_orbits(classes: &[CharKnotClass]) -> Vec<Vec<CharKnotClass>> {
    let mut remaining: BTreeSet<CharKnotClass> = classes.iter().cloned().collect();
    let mut out = Vec::new();
    while let Some(rep) = remaining.pop_first() {
        let orbit: BTreeSet<CharKnotClass> = units(rep.n).into_iter().map(|u| rep.scale(u)).collect();
        for o in &orbit {
            remaining.remove(o);
        }
        out.push(orbit.into_iter().collect());
    }
    out
}

fn linking_vector(a: &IntMatrix, beta: &[BigInt], n: u64) -> Vec<BigInt> {
    let nb = BigInt::from(n);
    a.mul_vec(beta)
        .expect("dimensions match")
        .into_iter()
        .map(|x| {
            debug_assert!(x.is_multiple_of(&nb));
            x / &nb
        })
        .collect()
}

/// The character of `c = [(1/n)·Aβ̃]` for the lift `β̃` with entries in `[0, n)`.
///
/// Its values are `ρ(x) = β̃ᵀx / n` and `lk(c, c) = β̃ᵀAβ̃ / n²`.
pub fn char_knot_to_character(l: &LinkingForm, beta: &CharKnotClass) -> Result<Character, ObstructionError> {
    let g = l.group();
    let a = g.ambient();
    if beta.beta.len() != a.rows() {
        return Err(ObstructionError::ClassLength {
            expected: a.rows(),
            got: beta.beta.len(),
        });
    }
    let w = linking_vector(a, &beta.beta, beta.n);
    let c = g.coordinates(&w)?;
    if cfg!(debug_assertions) {
        // another lift, β̃ + n·(1, 2, …, m), lands on the same element
        let other: Vec<BigInt> = beta
            .beta
            .iter()
            .enumerate()
            .map(|(i, x)| x + BigInt::from(beta.n) * BigInt::from(i as u64 + 1))
            .collect();
        let c2 = g.coordinates(&linking_vector(a, &other, beta.n))?;
        debug_assert_eq!(c, c2, "characteristic lift changed the linking class");
    }
    Character::new(l, c, beta.n)
}

/// `β̃ᵀ(V+Vᵀ)β̃ mod n²`, independent of the lift since `Aβ ≡ 0 (mod n)`.
pub fn form_value_mod_n2(v: &SeifertMatrix, beta: &CharKnotClass) -> BigInt {
    let n2 = BigInt::from(beta.n) * BigInt::from(beta.n);
    v.symmetrize()
        .bilinear(&beta.beta, &beta.beta)
        .expect("dimensions match")
        .mod_floor(&n2)
}

/// `βᵀ(V+Vᵀ)β ≡ 0 (mod n²)`.
pub fn seifert_criterion(v: &SeifertMatrix, beta: &CharKnotClass) -> bool {
    form_value_mod_n2(v, beta).is_zero()
}

/// Whether a 0-framed characteristic knot exists for `β`; the same test as
/// [`seifert_criterion`].
pub fn zero_framed_exists(v: &SeifertMatrix, beta: &CharKnotClass) -> bool {
    seifert_criterion(v, beta)
}

/// For cyclic `H₁(Σ₂K)` of order `d` and `n | d`: extends iff `n² | d`.
pub fn cyclic_criterion(g: &TorsionGroup, n: u64) -> Result<bool, ObstructionError> {
    check_modulus(n)?;
    if !g.is_cyclic() {
        return Err(ObstructionError::NotCyclic(g.rank()));
    }
    let order = g.order();
    let nb = BigInt::from(n);
    if !order.is_multiple_of(&nb) {
        return Err(ObstructionError::NoQuotient { n, order });
    }
    Ok(order.is_multiple_of(&(&nb * &nb)))
}
