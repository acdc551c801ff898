//! Elements of `C_n`, linearized local actions and their ages.
//!
//! Exponents use the cotangent convention: an exponent `e` records the
//! eigenvalue `ζ_n^e` of the pullback on a local coordinate differential, so the
//! eigenvalue on the top form is the product of the exponents' roots of unity.

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orders of purely non-symplectic automorphisms of an elliptic curve.
pub const SUPPORTED_ORDERS: [u32; 4] = [2, 3, 4, 6];

pub fn check_supported_order(n: u32) -> Result<()> {
    if SUPPORTED_ORDERS.contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(n))
    }
}

/// Divisors `d > 1` of `n`, ascending.
pub fn proper_subgroup_orders(n: u32) -> Vec<u32> {
    (2..=n).filter(|d| n % d == 0).collect()
}

/// The element `α^residue` of `C_n`, for the fixed generator `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    modulus: u32,
    residue: u32,
}

impl GroupElement {
    pub fn new(modulus: u32, residue: i64) -> Self {
        assert!(modulus >= 1, "group order must be positive");
        GroupElement {
            modulus,
            residue: residue.rem_euclid(modulus as i64) as u32,
        }
    }

    pub fn identity(modulus: u32) -> Self {
        GroupElement::new(modulus, 0)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn residue(&self) -> u32 {
        self.residue
    }

    pub fn is_identity(&self) -> bool {
        self.residue == 0
    }

    /// Order of the element.
    pub fn order(&self) -> u32 {
        self.modulus / self.residue.gcd(&self.modulus)
    }

    /// `gcd(residue, n)`: the residue of the canonical generator of `⟨self⟩`.
    pub fn subgroup_class(&self) -> u32 {
        self.residue.gcd(&self.modulus) % self.modulus
    }

    pub fn elements(modulus: u32) -> impl Iterator<Item = GroupElement> {
        (0..modulus).map(move |j| GroupElement::new(modulus, j as i64))
    }
}

/// Generator of `⟨α^j, α^k⟩`, so that `X^{α^j} ∩ X^{α^k} = X^{α^{gcd(j,k,n)}}`.
pub fn intersection_class(j: GroupElement, k: GroupElement) -> Result<GroupElement> {
    if j.modulus != k.modulus {
        return Err(Error::ModulusMismatch {
            left: j.modulus,
            right: k.modulus,
        });
    }
    let n = j.modulus;
    let g = j.residue.gcd(&k.residue).gcd(&n);
    Ok(GroupElement::new(n, g as i64))
}

/// Diagonalized local action: eigenvalues `ζ_n^{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalAction {
    modulus: u32,
    exponents: Vec<u32>,
}

impl LocalAction {
    pub fn new(modulus: u32, exponents: &[i64]) -> Self {
        assert!(modulus >= 1, "group order must be positive");
        LocalAction {
            modulus,
            exponents: exponents
                .iter()
                .map(|e| e.rem_euclid(modulus as i64) as u32)
                .collect(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Appends further directions, e.g. the elliptic factor.
    pub fn extended(&self, more: &[i64]) -> LocalAction {
        let mut all: Vec<i64> = self.exponents.iter().map(|&e| e as i64).collect();
        all.extend_from_slice(more);
        LocalAction::new(self.modulus, &all)
    }

    pub fn nonzero_count(&self) -> usize {
        self.exponents.iter().filter(|&&e| e != 0).count()
    }
}

pub fn age(l: &LocalAction) -> Ratio<i64> {
    let sum: i64 = l.exponents.iter().map(|&e| e as i64).sum();
    Ratio::new(sum, l.modulus as i64)
}

/// Returns `(age is an integer, determinant is 1)`; the two always agree.
pub fn age_is_integral_iff_unimodular(l: &LocalAction) -> (bool, bool) {
    let integral = age(l).is_integer();
    // det = Π ζ^{e_i}, tracked as an exponent of ζ_n.
    let det = l
        .exponents
        .iter()
        .fold(0u32, |acc, &e| (acc + e) % l.modulus);
    (integral, det == 0)
}

/// The local action of the `u`-th power: exponents `u·e_i mod n`.
pub fn power_transport(l: &LocalAction, u: u32) -> LocalAction {
    let exps: Vec<i64> = l.exponents.iter().map(|&e| e as i64 * u as i64).collect();
    LocalAction::new(l.modulus, &exps)
}

/// Exponent of the elliptic direction in the sector of `α^j`.
///
/// `α` acts on `E` as `α_E^{n-1}` and the pullback of `α_E` multiplies the
/// invariant differential by `ζ_n`.
pub fn elliptic_exponent(n: u32, j: u32) -> u32 {
    ((j as u64 * (n as u64 - 1)) % n as u64) as u32
}
