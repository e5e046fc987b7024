//! Tristram–Levine signatures, the Ξₙ invariant of a characteristic class,
//! the ribbon inequality, and the signature of a dihedral branched cover.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::modulus::{check_modulus, is_squarefree, ModulusError};
use crate::seifert::{twist_knot, SeifertMatrix, SurfaceClass};

const RM: RoundingMode = RoundingMode::ToEven;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignatureError {
    #[error("root of unity e^(2πi·{k}/{n}) needs 0 < k < n")]
    BadRoot { k: u64, n: u64 },
    #[error("signature indeterminate at e^(2πi·{k}/{n}): eigenvalue of magnitude {magnitude:e} is within tolerance of zero")]
    Indeterminate { k: u64, n: u64, magnitude: f64 },
    #[error("eigenvalue iteration did not converge in {0} sweeps")]
    NoConvergence(usize),
    #[error("arbitrary-precision arithmetic produced NaN")]
    Arithmetic,
    #[error(transparent)]
    Modulus(#[from] ModulusError),
    #[error("ribbon inequality needs square-free n, got {0}")]
    NotSquarefree(u64),
    #[error("Euler number of the branching surface must be even, got {0}")]
    OddEuler(i64),
    #[error("class is not characteristic mod {0}")]
    NotCharacteristic(u64),
    #[error("class has length {got}, Seifert matrix has size {expected}")]
    ClassLength { expected: usize, got: usize },
    #[error("twist knot with m = {0} has no D3 quotient (needs m ≡ 2 mod 3)")]
    NoTwistQuotient(i64),
}

/// Working precision and zero tolerance for eigen-sign counting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub bits: usize,
    pub zero_tolerance: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            bits: 128,
            zero_tolerance: 1e-9,
        }
    }
}

impl Precision {
    pub fn doubled(self) -> Self {
        Self {
            bits: self.bits * 2,
            ..self
        }
    }
}

/// `ω = e^{2πik/n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootOfUnity {
    pub k: u64,
    pub n: u64,
}

impl RootOfUnity {
    pub fn new(k: u64, n: u64) -> Result<Self, SignatureError> {
        if k == 0 || k >= n {
            return Err(SignatureError::BadRoot { k, n });
        }
        Ok(Self { k, n })
    }

    pub fn minus_one() -> Self {
        Self { k: 1, n: 2 }
    }
}

struct Arith {
    p: usize,
    cc: Consts,
}

impl Arith {
    fn new(p: usize) -> Self {
        Self {
            p,
            cc: Consts::new().expect("constant cache allocation"),
        }
    }

    fn int(&mut self, x: &BigInt) -> BigFloat {
        match x.to_i64() {
            Some(v) => BigFloat::from_i64(v, self.p),
            None => BigFloat::parse(&x.to_string(), Radix::Dec, self.p, RM, &mut self.cc),
        }
    }

    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }

    // (cos, sin) of 2πk/n
    fn root(&mut self, w: RootOfUnity) -> (BigFloat, BigFloat) {
        let pi = self.cc.pi(self.p, RM);
        let two_pi_k = pi.mul(&BigFloat::from_u64(2 * w.k, self.p), self.p, RM);
        let angle = two_pi_k.div(&BigFloat::from_u64(w.n, self.p), self.p, RM);
        let c = angle.cos(self.p, RM, &mut self.cc);
        let s = angle.sin(self.p, RM, &mut self.cc);
        (c, s)
    }
}

fn is_less(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(a.cmp(b), Some(x) if x < 0)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(ar: &Arith, mut a: Vec<Vec<BigFloat>>) -> Result<Vec<BigFloat>, SignatureError> {
    let n = a.len();
    let zero = BigFloat::from_i64(0, ar.p);
    let one = BigFloat::from_i64(1, ar.p);
    let two = BigFloat::from_i64(2, ar.p);
    let mut frob = zero.clone();
    for row in &a {
        for x in row {
            frob = ar.add(&frob, &ar.mul(x, x));
        }
    }
    // off-diagonal mass below frob·2^(−2(p−32)) counts as converged
    let mut eps = BigFloat::from_i64(1, ar.p);
    eps.set_exponent(-(ar.p as i32 - 32) * 2 + 1);
    let threshold = ar.mul(&frob, &eps);
    for _ in 0..MAX_SWEEPS {
        let mut off = zero.clone();
        for i in 0..n {
            for j in i + 1..n {
                off = ar.add(&off, &ar.mul(&a[i][j], &a[i][j]));
            }
        }
        if off.is_nan() {
            return Err(SignatureError::Arithmetic);
        }
        if !is_less(&threshold, &off) {
            return Ok((0..n).map(|i| a[i][i].clone()).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].is_zero() {
                    continue;
                }
                let tau = ar.div(&ar.sub(&a[q][q], &a[p][p]), &ar.mul(&two, &a[p][q]));
                let root = ar.sqrt(&ar.add(&one, &ar.mul(&tau, &tau)));
                let mut t = ar.div(&one, &ar.add(&tau.abs(), &root));
                if tau.is_negative() {
                    t = t.neg();
                }
                let c = ar.div(&one, &ar.sqrt(&ar.add(&one, &ar.mul(&t, &t))));
                let s = ar.mul(&t, &c);
                for k in 0..n {
                    let akp = a[k][p].clone();
                    let akq = a[k][q].clone();
                    a[k][p] = ar.sub(&ar.mul(&c, &akp), &ar.mul(&s, &akq));
                    a[k][q] = ar.add(&ar.mul(&s, &akp), &ar.mul(&c, &akq));
                }
                for k in 0..n {
                    let apk = a[p][k].clone();
                    let aqk = a[q][k].clone();
                    a[p][k] = ar.sub(&ar.mul(&c, &apk), &ar.mul(&s, &aqk));
                    a[q][k] = ar.add(&ar.mul(&s, &apk), &ar.mul(&c, &aqk));
                }
                a[p][q] = zero.clone();
                a[q][p] = zero.clone();
            }
        }
    }
    Err(SignatureError::NoConvergence(MAX_SWEEPS))
}

/// Signature of `(1−ω)V + (1−ω̄)Vᵀ`.
///
/// Writing `ω = c + is`, the form is `X + iY` with `X = (1−c)(V+Vᵀ)` and
/// `Y = −s(V−Vᵀ)`; its real embedding `[[X, −Y], [Y, X]]` has every
/// eigenvalue doubled.
pub fn tristram_levine(v: &SeifertMatrix, omega: RootOfUnity, prec: Precision) -> Result<i64, SignatureError> {
    RootOfUnity::new(omega.k, omega.n)?;
    let m = v.size();
    if m == 0 {
        return Ok(0);
    }
    let mut ar = Arith::new(prec.bits);
    let (c, s) = ar.root(omega);
    let one = BigFloat::from_i64(1, ar.p);
    let one_minus_c = ar.sub(&one, &c);
    let sym = v.symmetrize();
    let skew = v.matrix().checked_sub(&v.matrix().transpose()).expect("square");
    let x: Vec<Vec<BigFloat>> = to_float(&mut ar, &sym)
        .into_iter()
        .map(|row| row.iter().map(|e| ar.mul(&one_minus_c, e)).collect())
        .collect();
    let y: Vec<Vec<BigFloat>> = to_float(&mut ar, &skew)
        .into_iter()
        .map(|row| row.iter().map(|e| ar.mul(&s, e).neg()).collect())
        .collect();
    let mut emb = vec![vec![BigFloat::from_i64(0, ar.p); 2 * m]; 2 * m];
    for i in 0..m {
        for j in 0..m {
            emb[i][j] = x[i][j].clone();
            emb[i + m][j + m] = x[i][j].clone();
            emb[i][j + m] = y[i][j].neg();
            emb[i + m][j] = y[i][j].clone();
        }
    }
    let eig = jacobi_eigenvalues(&ar, emb)?;
    let tol = BigFloat::from_f64(prec.zero_tolerance, ar.p);
    let mut sig = 0i64;
    for e in &eig {
        if is_less(&e.abs(), &tol) {
            return Err(SignatureError::Indeterminate {
                k: omega.k,
                n: omega.n,
                magnitude: e.abs().to_string().parse().unwrap_or(0.0),
            });
        }
        sig += if e.is_negative() { -1 } else { 1 };
    }
    debug_assert!(sig % 2 == 0);
    Ok(sig / 2)
}

fn to_float(ar: &mut Arith, m: &IntMatrix) -> Vec<Vec<BigFloat>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| ar.int(x)).collect())
        .collect()
}

/// The `σ(W(K, β))` term: known exactly, known up to sign, or bounded in magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum SigmaW {
    Exact(i64),
    PlusMinus(u64),
    Bounded(u64),
}

/// Ξₙ as a candidate set: one value, two values `base ± k`, or the interval `[base − b, base + b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiValue {
    pub n: u64,
    /// `(n²−1)/(6n) · βᵀ(V+Vᵀ)β`.
    pub linking_term: BigRational,
    pub sigma_w: SigmaW,
    /// `Σ_{i=1}^{n−1} σ_{ζⁱ}(V_β)`.
    pub signature_sum: i64,
    pub low: BigRational,
    pub high: BigRational,
}

impl XiValue {
    fn base(&self) -> BigRational {
        &self.linking_term + BigRational::from_integer(self.signature_sum.into())
    }

    /// The finitely many candidates, or `None` for an interval.
    pub fn candidates(&self) -> Option<Vec<BigRational>> {
        match self.sigma_w {
            SigmaW::Exact(_) => Some(vec![self.low.clone()]),
            SigmaW::PlusMinus(0) => Some(vec![self.low.clone()]),
            SigmaW::PlusMinus(_) => Some(vec![self.low.clone(), self.high.clone()]),
            SigmaW::Bounded(_) => None,
        }
    }

    pub fn is_interval(&self) -> bool {
        matches!(self.sigma_w, SigmaW::Bounded(b) if b > 0)
    }
}

impl fmt::Display for XiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.candidates() {
            Some(c) => {
                let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", parts.join(", "))
            }
            None => write!(f, "[{}, {}]", self.low, self.high),
        }
    }
}

/// `Ξₙ = (n²−1)/(6n)·βᵀ(V+Vᵀ)β + σ(W) + Σ_{i=1}^{n−1} σ_{ζⁱ}(V_β)`.
pub fn xi_n(
    v: &SeifertMatrix,
    beta: &SurfaceClass,
    v_beta: &SeifertMatrix,
    n: u64,
    sigma_w: SigmaW,
    prec: Precision,
) -> Result<XiValue, SignatureError> {
    check_modulus(n)?;
    if beta.len() != v.size() {
        return Err(SignatureError::ClassLength {
            expected: v.size(),
            got: beta.len(),
        });
    }
    let a = v.symmetrize();
    let nb = BigInt::from(n);
    let ab = a.mul_vec(beta.coords()).expect("length checked");
    if ab.iter().any(|x| !x.is_multiple_of(&nb)) {
        return Err(SignatureError::NotCharacteristic(n));
    }
    let form = a.bilinear(beta.coords(), beta.coords()).expect("length checked");
    let coeff = BigRational::new(&nb * &nb - 1, BigInt::from(6) * &nb);
    let linking_term = coeff * BigRational::from_integer(form);
    let mut signature_sum = 0i64;
    for i in 1..n {
        signature_sum += tristram_levine(v_beta, RootOfUnity { k: i, n }, prec)?;
    }
    let base = &linking_term + BigRational::from_integer(signature_sum.into());
    let (lo, hi) = match sigma_w {
        SigmaW::Exact(k) => (k as i128, k as i128),
        SigmaW::PlusMinus(k) | SigmaW::Bounded(k) => (-(k as i128), k as i128),
    };
    let shift = |x: i128| &base + BigRational::from_integer(BigInt::from(x));
    let out = XiValue {
        n,
        linking_term,
        sigma_w,
        signature_sum,
        low: shift(lo),
        high: shift(hi),
    };
    debug_assert_eq!(out.base(), base);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RibbonVerdict {
    ConsistentWithRibbon,
    NotRibbon,
}

/// `rk H₁(Mₙ) + (n−1)/2`.
pub fn ribbon_bound(rank_h1: u64, n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(rank_h1) + BigInt::from((n - 1) / 2))
}

/// A ribbon knot has `|Ξₙ| ≤ rk H₁(Mₙ) + (n−1)/2`. The verdict is
/// not-ribbon only when no candidate value satisfies it.
pub fn ribbon_test(xi: &XiValue, rank_h1: u64, n: u64) -> Result<RibbonVerdict, SignatureError> {
    check_modulus(n)?;
    if !is_squarefree(n) {
        return Err(SignatureError::NotSquarefree(n));
    }
    let r = ribbon_bound(rank_h1, n);
    let fits = match xi.candidates() {
        Some(c) => c.iter().any(|x| x.abs() <= r),
        // the interval [low, high] meets [−r, r]
        None => xi.low <= r && xi.high >= -r.clone(),
    };
    Ok(if fits {
        RibbonVerdict::ConsistentWithRibbon
    } else {
        RibbonVerdict::NotRibbon
    })
}

/// `σ(Y) = n·σ(X) − (n−1)/4 · e(B) − Σ Ξₙ(Kᵢ)`.
pub fn cover_signature(
    sigma_x: i64,
    euler_b: i64,
    xi: &[BigRational],
    n: u64,
) -> Result<BigRational, SignatureError> {
    check_modulus(n)?;
    if euler_b % 2 != 0 {
        return Err(SignatureError::OddEuler(euler_b));
    }
    let nn = BigInt::from(n);
    let mut s = BigRational::from_integer(&nn * sigma_x);
    s -= BigRational::new((&nn - 1) * euler_b, BigInt::from(4));
    for x in xi {
        s -= x;
    }
    Ok(s)
}

/// Ξ₃ of the twist knot `K_m`, using the unknotted class `β = (−1, 1)` and
/// `σ(W) = ±1`.
pub fn twist_xi3(m: i64) -> Result<XiValue, SignatureError> {
    if (m - 2).rem_euclid(3) != 0 {
        return Err(SignatureError::NoTwistQuotient(m));
    }
    xi_n(
        &twist_knot(m),
        &SurfaceClass::from_i64(&[-1, 1]),
        &SeifertMatrix::unknot(),
        3,
        SigmaW::PlusMinus(1),
        Precision::default(),
    )
}

/// Ribbon verdict for `K_m` at `n = 3`; its irregular dihedral cover is `S³`, so the rank is 0.
pub fn twist_ribbon(m: i64) -> Result<RibbonVerdict, SignatureError> {
    ribbon_test(&twist_xi3(m)?, 0, 3)
}
