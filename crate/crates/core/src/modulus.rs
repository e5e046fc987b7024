use thiserror::Error;

/// Rejection of a dihedral modulus `n`. Only odd `n > 1` are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ModulusError {
    #[error("modulus {0} is even; dihedral quotients need odd n")]
    Even(u64),
    #[error("modulus must exceed 1, got {0}")]
    Trivial(u64),
}

pub fn check_modulus(n: u64) -> Result<(), ModulusError> {
    if n.is_multiple_of(2) {
        return Err(ModulusError::Even(n));
    }
    if n < 2 {
        return Err(ModulusError::Trivial(n));
    }
    Ok(())
}

/// Residues in `[1, n)` coprime to `n`, ascending.
pub fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|&u| num_integer::gcd(u, n) == 1).collect()
}

pub fn is_squarefree(n: u64) -> bool {
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_and_size() {
        assert_eq!(check_modulus(4), Err(ModulusError::Even(4)));
        assert_eq!(check_modulus(0), Err(ModulusError::Even(0)));
        assert_eq!(check_modulus(1), Err(ModulusError::Trivial(1)));
        assert!(check_modulus(3).is_ok());
    }

    #[test]
    fn unit_groups() {
        assert_eq!(units(3), vec![1, 2]);
        assert_eq!(units(9), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(units(15).len(), 8);
    }

    #[test]
    fn squarefree() {
        let sf: Vec<u64> = (1..30).filter(|&n| is_squarefree(n)).collect();
        assert_eq!(sf, vec![1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29]);
    }
}
