//! Seifert matrices and the constructions built directly on them.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{det, four_squares, IntMatrix, LinalgError};
use crate::modulus::{check_modulus, ModulusError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("Seifert matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("Seifert matrix must have even size, got {0}")]
    OddDimension(usize),
    #[error("det(V - V^T) = {0}, expected 1")]
    SkewNotUnimodular(BigInt),
    #[error("surface class has length {got}, Seifert matrix has size {expected}")]
    ClassLength { expected: usize, got: usize },
    #[error(transparent)]
    Modulus(#[from] ModulusError),
    #[error("class is not characteristic: (V+V^T)·beta is not 0 mod {0}")]
    NotCharacteristic(u64),
    #[error("form value {value} is not divisible by n^2 = {n_squared}")]
    FormNotDivisible { value: BigInt, n_squared: BigInt },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A square integer matrix of even size whose skew part `V − Vᵀ` is unimodular.
///
/// The unknot is the 0×0 matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SeifertMatrix(IntMatrix);

impl SeifertMatrix {
    pub fn new(v: IntMatrix) -> Result<Self, SeifertError> {
        if !v.is_square() {
            return Err(SeifertError::NotSquare {
                rows: v.rows(),
                cols: v.cols(),
            });
        }
        if v.rows() % 2 == 1 {
            return Err(SeifertError::OddDimension(v.rows()));
        }
        let skew = det(&v.checked_sub(&v.transpose())?)?;
        if !skew.is_one() {
            return Err(SeifertError::SkewNotUnimodular(skew));
        }
        Ok(Self(v))
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, SeifertError> {
        Self::new(IntMatrix::from_rows(rows))
    }

    pub fn unknot() -> Self {
        Self(IntMatrix::zeros(0, 0))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn genus(&self) -> usize {
        self.0.rows() / 2
    }

    /// `A = V + Vᵀ`.
    pub fn symmetrize(&self) -> IntMatrix {
        self.0
            .checked_add(&self.0.transpose())
            .expect("square matrix plus its transpose")
    }

    /// `|det(V + Vᵀ)| = |Δ(−1)|`, always odd.
    pub fn knot_determinant(&self) -> BigInt {
        let d = det(&self.symmetrize()).expect("square").abs();
        // det(V+Vᵀ) ≡ det(V−Vᵀ) = 1 (mod 2)
        assert!(d.is_odd(), "even knot determinant {d} for a valid Seifert matrix");
        d
    }

    /// Symmetrized form value `xᵀ(V + Vᵀ)x`.
    pub fn form_value(&self, x: &SurfaceClass) -> Result<BigInt, SeifertError> {
        self.check_class(x)?;
        Ok(self.symmetrize().bilinear(&x.0, &x.0)?)
    }

    pub(crate) fn check_class(&self, x: &SurfaceClass) -> Result<(), SeifertError> {
        if x.len() != self.size() {
            return Err(SeifertError::ClassLength {
                expected: self.size(),
                got: x.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for SeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for SeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SeifertMatrix{}", self.0)
    }
}

/// A first-homology class of the Seifert surface, in the basis of its matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceClass(Vec<BigInt>);

impl SurfaceClass {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry-wise residues in `[0, n)`.
    pub fn reduce_mod(&self, n: u64) -> Vec<u64> {
        let n = BigInt::from(n);
        self.0
            .iter()
            .map(|x| {
                let r = x.mod_floor(&n);
                u64::try_from(r).expect("residue below a u64 modulus")
            })
            .collect()
    }
}

/// Seifert matrix `[[−1, 1], [0, m]]` of the twist knot with `m` half-twists.
pub fn twist_knot(m: i64) -> SeifertMatrix {
    SeifertMatrix::from_rows(&[[-1, 1], [0, m]]).expect("twist-knot matrices are valid")
}

/// Block-diagonal Seifert matrix of the connected sum.
pub fn connected_sum(a: &SeifertMatrix, b: &SeifertMatrix) -> SeifertMatrix {
    // det(V1⊕V2 − (V1⊕V2)ᵀ) = 1·1
    SeifertMatrix(a.0.block_diag(&b.0))
}

/// `k`-fold connected sum of a knot with itself.
pub fn self_sum(v: &SeifertMatrix, k: usize) -> SeifertMatrix {
    (0..k).fold(SeifertMatrix::unknot(), |acc, _| connected_sum(&acc, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilizationSign {
    /// Form value already zero; nothing was added.
    Unchanged,
    /// Blocks `[[0,−1],[0,0]]`, for a positive form value.
    NegativeBlocks,
    /// Blocks `[[0,1],[0,0]]`, for a negative form value.
    PositiveBlocks,
}

/// Output of [`stabilize_zero_framed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stabilization {
    pub matrix: SeifertMatrix,
    pub class: SurfaceClass,
    pub sign: StabilizationSign,
    /// The four-square decomposition of `|form| / (2n²)`, largest first.
    pub squares: [BigUint; 4],
}

/// Stabilizes `V` by four trivial tori so that a mod-`n` characteristic
/// class with form value `≡ 0 (mod n²)` becomes a class with form value 0.
///
/// The new class is `(β, a₁n, a₁n, …, a₄n, a₄n)` where `Σ aᵢ² = |βᵀAβ| / (2n²)`.
pub fn stabilize_zero_framed(
    v: &SeifertMatrix,
    beta: &SurfaceClass,
    n: u64,
) -> Result<Stabilization, SeifertError> {
    check_modulus(n)?;
    v.check_class(beta)?;
    let a = v.symmetrize();
    let nn = BigInt::from(n);
    if a.mul_vec(beta.coords())?.iter().any(|x| !x.is_multiple_of(&nn)) {
        return Err(SeifertError::NotCharacteristic(n));
    }
    let value = a.bilinear(beta.coords(), beta.coords())?;
    let n_squared = &nn * &nn;
    if !value.is_multiple_of(&n_squared) {
        return Err(SeifertError::FormNotDivisible { value, n_squared });
    }
    if value.is_zero() {
        return Ok(Stabilization {
            matrix: v.clone(),
            class: beta.clone(),
            sign: StabilizationSign::Unchanged,
            squares: std::array::from_fn(|_| BigUint::zero()),
        });
    }
    // value = 2·βᵀVβ is even and n is odd, so value / n² is even.
    let quotient = &value / &n_squared;
    let half = (quotient.abs() / 2u32).to_biguint().expect("nonnegative");
    let mut squares = four_squares(&half);
    squares.reverse();
    let (sign, off) = if value.sign() == Sign::Plus {
        (StabilizationSign::NegativeBlocks, -1)
    } else {
        (StabilizationSign::PositiveBlocks, 1)
    };
    let block = IntMatrix::from_rows(&[[0, off], [0, 0]]);
    let matrix = (0..4).fold(v.0.clone(), |m, _| m.block_diag(&block));
    let mut coords = beta.coords().to_vec();
    for s in &squares {
        let x = BigInt::from(s.clone()) * &nn;
        coords.push(x.clone());
        coords.push(x);
    }
    Ok(Stabilization {
        matrix: SeifertMatrix(matrix),
        class: SurfaceClass(coords),
        sign,
        squares,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_primitive;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn validation() {
        assert!(matches!(
            SeifertMatrix::from_rows(&[[1, 1], [1, 1]]),
            Err(SeifertError::SkewNotUnimodular(d)) if d.is_zero()
        ));
        assert!(matches!(
            SeifertMatrix::new(IntMatrix::from_rows(&[[1, 2, 3]])),
            Err(SeifertError::NotSquare { rows: 1, cols: 3 })
        ));
        assert!(matches!(
            SeifertMatrix::new(IntMatrix::from_rows(&[[1]])),
            Err(SeifertError::OddDimension(1))
        ));
        assert!(matches!(
            SeifertMatrix::from_rows(&[[0, 2], [0, 0]]),
            Err(SeifertError::SkewNotUnimodular(d)) if d == BigInt::from(4)
        ));
    }

    #[test]
    fn symmetrize_twist() {
        let v = twist_knot(7);
        assert_eq!(v.symmetrize(), IntMatrix::from_rows(&[[-2, 1], [1, 14]]));
        assert_eq!(SeifertMatrix::unknot().symmetrize(), IntMatrix::zeros(0, 0));
    }

    #[test]
    fn twist_determinants() {
        for m in -30..=30 {
            assert_eq!(twist_knot(m).knot_determinant(), bi(4 * m + 1).abs(), "m = {m}");
        }
        assert_eq!(twist_knot(-1).matrix(), &IntMatrix::from_rows(&[[-1, 1], [0, -1]]));
        assert_eq!(twist_knot(0).knot_determinant(), bi(1));
        assert_eq!(twist_knot(2).knot_determinant(), bi(9));
        assert_eq!(SeifertMatrix::unknot().knot_determinant(), bi(1));
    }

    #[test]
    fn knot_937_determinant() {
        let v = SeifertMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, -2, 1], [-1, -1, 0, -1]]).unwrap();
        assert_eq!(v.knot_determinant(), bi(45));
        assert_eq!(v.genus(), 2);
    }

    #[test]
    fn connected_sums() {
        let t = twist_knot(-1);
        assert_eq!(connected_sum(&t, &SeifertMatrix::unknot()), t);
        let tt = connected_sum(&t, &t);
        assert_eq!(tt.size(), 4);
        assert_eq!(tt.knot_determinant(), bi(9));
        assert_eq!(self_sum(&t, 3).knot_determinant(), bi(27));
        assert_eq!(self_sum(&t, 3).size(), 6);
    }

    #[test]
    fn stabilize_twist_eleven() {
        let v = twist_knot(11);
        let beta = SurfaceClass::from_i64(&[-1, 1]);
        assert_eq!(v.form_value(&beta).unwrap(), bi(18));
        let s = stabilize_zero_framed(&v, &beta, 3).unwrap();
        assert_eq!(s.class, SurfaceClass::from_i64(&[-1, 1, 3, 3, 0, 0, 0, 0, 0, 0]));
        assert_eq!(s.matrix.form_value(&s.class).unwrap(), bi(0));
        assert_eq!(s.sign, StabilizationSign::NegativeBlocks);
        assert_eq!(s.class.reduce_mod(3), vec![2, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert!(is_primitive(s.class.coords()));
    }

    #[test]
    fn stabilize_negative_value_uses_positive_blocks() {
        // m = −7: form value 2m − 4 = −18, which is 0 mod 9.
        let v = twist_knot(-7);
        let beta = SurfaceClass::from_i64(&[-1, 1]);
        let s = stabilize_zero_framed(&v, &beta, 3).unwrap();
        assert_eq!(s.sign, StabilizationSign::PositiveBlocks);
        assert_eq!(s.matrix.form_value(&s.class).unwrap(), bi(0));
        assert_eq!(s.matrix.matrix()[(3, 2)], bi(0));
        assert_eq!(s.matrix.matrix()[(2, 3)], bi(1));
    }

    #[test]
    fn stabilize_zero_value_is_identity() {
        let v = twist_knot(2);
        let beta = SurfaceClass::from_i64(&[-1, 1]);
        let s = stabilize_zero_framed(&v, &beta, 3).unwrap();
        assert_eq!(s.sign, StabilizationSign::Unchanged);
        assert_eq!(s.matrix, v);
        assert_eq!(s.class, beta);
    }

    #[test]
    fn stabilize_rejects_bad_input() {
        let beta = SurfaceClass::from_i64(&[-1, 1]);
        assert!(matches!(
            stabilize_zero_framed(&twist_knot(5), &beta, 3),
            Err(SeifertError::FormNotDivisible { .. })
        ));
        assert!(matches!(
            stabilize_zero_framed(&twist_knot(3), &beta, 3),
            Err(SeifertError::NotCharacteristic(3))
        ));
        assert!(matches!(
            stabilize_zero_framed(&twist_knot(2), &beta, 4),
            Err(SeifertError::Modulus(ModulusError::Even(4)))
        ));
        assert!(matches!(
            stabilize_zero_framed(&twist_knot(2), &SurfaceClass::from_i64(&[1]), 3),
            Err(SeifertError::ClassLength { expected: 2, got: 1 })
        ));
    }
}
