//! First homology of the double branched cover and its torsion linking form.
//!
//! `H₁(Σ₂K)` is the cokernel of `A = V + Vᵀ` acting on `ℤ^{2g}`. With
//! `P·A·Q = D = diag(1,…,1,d₁,…,d_r)` the columns of `P⁻¹` past the unit block
//! generate it, and the coordinates of `[x]` are the tail of `P·x`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{det, rational_inverse, snf, IntMatrix, LinalgError, RatMatrix, ResidueQZ};
use crate::seifert::SeifertMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("presentation matrix is singular")]
    Singular,
    #[error("expected {expected} generators, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("generator {index} has length {got}, expected {expected}")]
    GeneratorLength { index: usize, expected: usize, got: usize },
    #[error("generator {index} has order {got}, expected {expected}")]
    GeneratorOrder { index: usize, expected: BigInt, got: BigInt },
    #[error("the given generators do not generate the group")]
    NotGenerating,
    #[error("element has {got} coordinates, group has rank {expected}")]
    CoordinateCount { expected: usize, got: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `ℤ_{d₁} ⊕ … ⊕ ℤ_{d_r}` presented by a nonsingular symmetric `A`, with
/// explicit integer-vector generators `ℓᵢ` of order `dᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionGroup {
    ambient: IntMatrix,
    ambient_inv: RatMatrix,
    factors: Vec<BigInt>,
    generators: Vec<Vec<BigInt>>,
    // Row i maps x ∈ ℤᵐ to its i-th coordinate mod dᵢ.
    coord_map: IntMatrix,
}

/// An element `Σ xᵢℓᵢ` of a [`TorsionGroup`], with `0 ≤ xᵢ < dᵢ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<BigInt>);

impl GroupElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement{self}")
    }
}

impl TorsionGroup {
    /// Group presented by `A`, with generators read off its Smith normal form.
    pub fn from_presentation(a: &IntMatrix) -> Result<Self, CoverError> {
        let ambient_inv = inverse(a)?;
        let s = snf(a);
        let m = a.rows();
        let k = m - s.invariant_factors().len();
        let p_inv = s.p_inverse();
        let generators = (k..m).map(|j| p_inv.column(j)).collect();
        let coord_rows: Vec<Vec<BigInt>> = (k..m).map(|i| s.p().row(i).to_vec()).collect();
        Ok(Self {
            ambient: a.clone(),
            ambient_inv,
            factors: s.invariant_factors().to_vec(),
            generators,
            coord_map: rows_to_matrix(coord_rows, m),
        })
    }

    /// Group presented by `A`, expressed in caller-chosen generators.
    ///
    /// The generators must have orders `d₁, …, d_r` (the invariant factors of
    /// `A`, in order) and must generate the cokernel.
    pub fn with_generators(a: &IntMatrix, generators: Vec<Vec<BigInt>>) -> Result<Self, CoverError> {
        let ambient_inv = inverse(a)?;
        let s = snf(a);
        let factors = s.invariant_factors().to_vec();
        let m = a.rows();
        if generators.len() != factors.len() {
            return Err(CoverError::GeneratorCount {
                expected: factors.len(),
                got: generators.len(),
            });
        }
        for (index, (g, d)) in generators.iter().zip(&factors).enumerate() {
            if g.len() != m {
                return Err(CoverError::GeneratorLength {
                    index,
                    expected: m,
                    got: g.len(),
                });
            }
            let order = crate::linalg::order_in_cokernel(&ambient_inv, g)?;
            if &order != d {
                return Err(CoverError::GeneratorOrder {
                    index,
                    expected: d.clone(),
                    got: order,
                });
            }
        }
        // [L | A] spans ℤᵐ iff its Smith form has m unit entries.
        let l = IntMatrix::from_columns(m, &generators)?;
        let la = l.hconcat(a)?;
        let sla = snf(&la);
        if sla.rank() != m || sla.diagonal().iter().any(|x| !x.is_one()) {
            return Err(CoverError::NotGenerating);
        }
        // Coordinates of e_j: any integer solution of L y + A z = e_j gives y mod d.
        let r = factors.len();
        let mut coord_rows = vec![Vec::with_capacity(m); r];
        for j in 0..m {
            let mut e = vec![BigInt::zero(); m];
            e[j] = BigInt::one();
            let yz = crate::linalg::solve_integer(&la, &e)?.ok_or(CoverError::NotGenerating)?;
            for i in 0..r {
                coord_rows[i].push(yz[i].mod_floor(&factors[i]));
            }
        }
        Ok(Self {
            ambient: a.clone(),
            ambient_inv,
            factors,
            generators,
            coord_map: rows_to_matrix(coord_rows, m),
        })
    }

    /// The presenting matrix `A`.
    pub fn ambient(&self) -> &IntMatrix {
        &self.ambient
    }

    pub fn ambient_inverse(&self) -> &RatMatrix {
        &self.ambient_inv
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    /// Number of cyclic summands `r`.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    /// Largest invariant factor, the exponent of the group (1 if trivial).
    pub fn exponent(&self) -> BigInt {
        self.factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![BigInt::zero(); self.rank()])
    }

    /// Element with the given coordinates, reduced mod `dᵢ`.
    pub fn element(&self, coords: &[BigInt]) -> Result<GroupElement, CoverError> {
        if coords.len() != self.rank() {
            return Err(CoverError::CoordinateCount {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(GroupElement(
            coords.iter().zip(&self.factors).map(|(x, d)| x.mod_floor(d)).collect(),
        ))
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement, CoverError> {
        let c: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
        self.element(&c)
    }

    /// Class of an integer vector `x ∈ ℤᵐ`.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<GroupElement, CoverError> {
        let y = self.coord_map.mul_vec(x)?;
        self.element(&y)
    }

    /// The integer vector `Σ xᵢℓᵢ` representing `c`.
    pub fn lift(&self, c: &GroupElement) -> Vec<BigInt> {
        let m = self.ambient.rows();
        let mut out = vec![BigInt::zero(); m];
        for (x, l) in c.0.iter().zip(&self.generators) {
            for (o, li) in out.iter_mut().zip(l) {
                *o += x * li;
            }
        }
        out
    }

    /// `u·c`.
    pub fn scale(&self, c: &GroupElement, u: &BigInt) -> GroupElement {
        GroupElement(
            c.0.iter()
                .zip(&self.factors)
                .map(|(x, d)| (x * u).mod_floor(d))
                .collect(),
        )
    }

    /// Additive order of `c`.
    pub fn element_order(&self, c: &GroupElement) -> BigInt {
        c.0.iter()
            .zip(&self.factors)
            .fold(BigInt::one(), |acc, (x, d)| acc.lcm(&(d / x.gcd(d))))
    }

    /// `lk([u],[v]) = uᵀA⁻¹v mod ℤ` for integer vectors.
    pub fn link(&self, u: &[BigInt], v: &[BigInt]) -> Result<ResidueQZ, CoverError> {
        pair_through(&self.ambient_inv, u, v)
    }
}

fn inverse(a: &IntMatrix) -> Result<RatMatrix, CoverError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    if det(a)?.is_zero() {
        return Err(CoverError::Singular);
    }
    Ok(rational_inverse(a)?)
}

fn rows_to_matrix(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let r = rows.len();
    IntMatrix::new(r, cols, rows.into_iter().flatten().collect()).expect("rows of equal length")
}

/// Steps 1 to 3: `H₁(Σ₂K)` with generators from the Smith form of `V + Vᵀ`.
pub fn double_cover_homology(v: &SeifertMatrix) -> TorsionGroup {
    TorsionGroup::from_presentation(&v.symmetrize()).expect("V + Vᵀ has odd determinant")
}

/// `lk([u],[v]) = uᵀA⁻¹v mod ℤ`.
pub fn evaluate_linking(a: &IntMatrix, u: &[BigInt], v: &[BigInt]) -> Result<ResidueQZ, CoverError> {
    pair_through(&inverse(a)?, u, v)
}

fn pair_through(inv: &RatMatrix, u: &[BigInt], v: &[BigInt]) -> Result<ResidueQZ, CoverError> {
    if u.len() != inv.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "vector of length {} against a {}x{} form",
            u.len(),
            inv.rows(),
            inv.cols()
        ))
        .into());
    }
    let w = inv.mul_int_vec(v)?;
    let s: BigRational = u
        .iter()
        .zip(&w)
        .map(|(a, b)| b * BigRational::from_integer(a.clone()))
        .sum();
    Ok(ResidueQZ::new(s))
}

/// The matrix `Λᵢⱼ = lk(ℓᵢ, ℓⱼ)` of the linking pairing, with its group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingForm {
    group: TorsionGroup,
    lambda: Vec<Vec<ResidueQZ>>,
}

impl LinkingForm {
    pub fn group(&self) -> &TorsionGroup {
        &self.group
    }

    pub fn lambda(&self) -> &[Vec<ResidueQZ>] {
        &self.lambda
    }

    pub fn entry(&self, i: usize, j: usize) -> &ResidueQZ {
        &self.lambda[i][j]
    }

    /// `lk(c, c') = Σ xᵢ yⱼ Λᵢⱼ`.
    pub fn pair(&self, c: &GroupElement, d: &GroupElement) -> ResidueQZ {
        let mut acc = ResidueQZ::zero();
        for (i, x) in c.coords().iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in d.coords().iter().enumerate() {
                if !y.is_zero() {
                    acc = acc + self.lambda[i][j].scale(&(x * y));
                }
            }
        }
        acc
    }

    /// `(lk(c, ℓ₁), …, lk(c, ℓ_r))`, the character of `c` on the generators.
    pub fn character_values(&self, c: &GroupElement) -> Vec<ResidueQZ> {
        (0..self.lambda.len())
            .map(|j| {
                c.coords()
                    .iter()
                    .enumerate()
                    .map(|(i, x)| self.lambda[i][j].scale(x))
                    .sum()
            })
            .collect()
    }

    /// Common denominator `N` of all `Λᵢⱼ`, together with `N·Λ` as residues mod `N`.
    pub(crate) fn scaled(&self) -> (BigInt, Vec<Vec<BigInt>>) {
        let n = self.group.exponent();
        let m = self
            .lambda
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let v = x.value() * BigRational::from_integer(n.clone());
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        (n, m)
    }
}

/// Step 4: `Λᵢⱼ = ℓᵢᵀA⁻¹ℓⱼ mod ℤ`.
pub fn linking_form(g: &TorsionGroup) -> LinkingForm {
    let lambda = g
        .generators
        .iter()
        .map(|u| {
            g.generators
                .iter()
                .map(|v| g.link(u, v).expect("generator lengths match A"))
                .collect()
        })
        .collect();
    LinkingForm {
        group: g.clone(),
        lambda,
    }
}

/// Step 5: `lk(c,c) = Σ xᵢxⱼΛᵢⱼ`.
pub fn self_linking(l: &LinkingForm, c: &GroupElement) -> ResidueQZ {
    l.pair(c, c)
}

impl fmt::Display for LinkingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.lambda.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::twist_knot;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn v937() -> SeifertMatrix {
        SeifertMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, -2, 1], [-1, -1, 0, -1]]).unwrap()
    }

    fn vecs(xs: &[&[i64]]) -> Vec<Vec<BigInt>> {
        xs.iter().map(|v| v.iter().map(|&x| bi(x)).collect()).collect()
    }

    fn rq(a: i64, b: i64) -> ResidueQZ {
        ResidueQZ::from_fraction(a, b)
    }

    // Order of [v] by the prime-divisor test: d·v ∈ Aℤᵐ and (d/p)·v ∉ Aℤᵐ.
    fn order_by_solve(a: &IntMatrix, v: &[BigInt], d: u64) -> bool {
        let in_image = |k: u64| {
            let kv: Vec<BigInt> = v.iter().map(|x| x * k).collect();
            crate::linalg::solve_integer(a, &kv).unwrap().is_some()
        };
        let primes: Vec<u64> = (2..=d).filter(|p| d % p == 0 && (2..*p).all(|q| p % q != 0)).collect();
        in_image(d) && primes.iter().all(|p| !in_image(d / p))
    }

    #[test]
    fn homology_937() {
        let g = double_cover_homology(&v937());
        assert_eq!(g.invariant_factors(), &[bi(3), bi(15)]);
        assert_eq!(g.order(), bi(45));
        for (l, d) in g.generators().iter().zip([3, 15]) {
            assert!(order_by_solve(g.ambient(), l, d));
        }
    }

    #[test]
    fn trivial_and_cyclic_groups() {
        let u = SeifertMatrix::from_rows(&[[0, -1], [0, 0]]).unwrap();
        let g = double_cover_homology(&u);
        assert_eq!(g.rank(), 0);
        assert_eq!(g.order(), bi(1));
        assert_eq!(linking_form(&g).lambda().len(), 0);
        let g0 = double_cover_homology(&SeifertMatrix::unknot());
        assert_eq!(g0.rank(), 0);
        let t = double_cover_homology(&twist_knot(-1));
        assert_eq!(t.invariant_factors(), &[bi(3)]);
        assert!(t.is_cyclic());
    }

    #[test]
    fn hand_basis_937() {
        let a = v937().symmetrize();
        let g = TorsionGroup::with_generators(&a, vecs(&[&[-1, -1, 0, 0], &[-1, 0, 0, 0]])).unwrap();
        let l = linking_form(&g);
        assert_eq!(l.lambda(), &[vec![rq(2, 3), rq(1, 3)], vec![rq(1, 3), rq(2, 5)]]);
        // each generator maps to its own coordinate vector
        assert_eq!(g.coordinates(&g.generators()[0]).unwrap(), g.element_i64(&[1, 0]).unwrap());
        assert_eq!(g.coordinates(&g.generators()[1]).unwrap(), g.element_i64(&[0, 1]).unwrap());
    }

    #[test]
    fn with_generators_rejects_bad_choices() {
        let a = v937().symmetrize();
        assert!(matches!(
            TorsionGroup::with_generators(&a, vecs(&[&[-1, 0, 0, 0], &[-1, -1, 0, 0]])),
            Err(CoverError::GeneratorOrder { index: 0, .. })
        ));
        // 5·ℓ₂ has order 3, the right order for the first slot but it lies in ⟨ℓ₂⟩.
        assert!(matches!(
            TorsionGroup::with_generators(&a, vecs(&[&[-5, 0, 0, 0], &[-1, 0, 0, 0]])),
            Err(CoverError::NotGenerating)
        ));
        assert!(matches!(
            TorsionGroup::with_generators(&a, vecs(&[&[-1, 0, 0, 0]])),
            Err(CoverError::GeneratorCount { expected: 2, got: 1 })
        ));
        assert_eq!(
            TorsionGroup::with_generators(&IntMatrix::from_rows(&[[1, 1], [1, 1]]), vec![]),
            Err(CoverError::Singular)
        );
    }

    #[test]
    fn evaluate_on_hand_vectors() {
        let a = v937().symmetrize();
        let l1 = vecs(&[&[-1, -1, 0, 0]]).remove(0);
        let l2 = vecs(&[&[-1, 0, 0, 0]]).remove(0);
        assert_eq!(evaluate_linking(&a, &l1, &l1).unwrap(), rq(2, 3));
        assert_eq!(evaluate_linking(&a, &l1, &l2).unwrap(), rq(1, 3));
        assert_eq!(evaluate_linking(&a, &l2, &l2).unwrap(), rq(2, 5));
        let z = vecs(&[&[3, -1, 2, 7]]).remove(0);
        let az = a.mul_vec(&z).unwrap();
        assert!(evaluate_linking(&a, &az, &l2).unwrap().is_zero());
        assert!(evaluate_linking(&a, &l1[..3], &l2).is_err());
    }

    #[test]
    fn trefoil_form() {
        let a = twist_knot(-1).symmetrize();
        let e1 = vec![bi(1), bi(0)];
        assert_eq!(evaluate_linking(&a, &e1, &e1).unwrap(), rq(1, 3));
        let g = TorsionGroup::with_generators(&a, vec![e1]).unwrap();
        assert_eq!(linking_form(&g).lambda(), &[vec![rq(1, 3)]]);
    }

    #[test]
    fn self_linking_values() {
        let a = v937().symmetrize();
        let g = TorsionGroup::with_generators(&a, vecs(&[&[-1, -1, 0, 0], &[-1, 0, 0, 0]])).unwrap();
        let l = linking_form(&g);
        assert!(self_linking(&l, &g.element_i64(&[1, 5]).unwrap()).is_zero());
        assert!(self_linking(&l, &g.zero()).is_zero());
        assert_eq!(self_linking(&l, &g.element_i64(&[0, 3]).unwrap()), rq(3, 5));
    }

    #[test]
    fn coordinates_agree_across_bases() {
        let a = v937().symmetrize();
        let snf_group = TorsionGroup::from_presentation(&a).unwrap();
        let hand = TorsionGroup::with_generators(&a, vecs(&[&[-1, -1, 0, 0], &[-1, 0, 0, 0]])).unwrap();
        // the same integer vector has the same linking with everything
        for x in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [2, -3, 1, 5]] {
            let x: Vec<BigInt> = x.iter().map(|&v| bi(v)).collect();
            let cs = snf_group.coordinates(&x).unwrap();
            let cp = hand.coordinates(&x).unwrap();
            let ls = snf_group.lift(&cs);
            let lp = hand.lift(&cp);
            let diff: Vec<BigInt> = ls.iter().zip(&lp).map(|(p, q)| p - q).collect();
            assert!(crate::linalg::solve_integer(&a, &diff).unwrap().is_some());
            let diff2: Vec<BigInt> = ls.iter().zip(&x).map(|(p, q)| p - q).collect();
            assert!(crate::linalg::solve_integer(&a, &diff2).unwrap().is_some());
        }
    }

    #[test]
    fn scaled_form_is_integral() {
        let g = double_cover_homology(&v937());
        let l = linking_form(&g);
        let (n, m) = l.scaled();
        assert_eq!(n, bi(15));
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(ResidueQZ::from_fraction(x.clone(), n.clone()), *l.entry(i, j));
            }
        }
    }

    #[test]
    fn element_orders() {
        let g = double_cover_homology(&v937());
        assert_eq!(g.element_order(&g.element_i64(&[0, 5]).unwrap()), bi(3));
        assert_eq!(g.element_order(&g.element_i64(&[1, 3]).unwrap()), bi(15));
        assert_eq!(g.element_order(&g.zero()), bi(1));
        assert_eq!(g.element_i64(&[4, -1]).unwrap().to_string(), "(1,14)");
    }
}
