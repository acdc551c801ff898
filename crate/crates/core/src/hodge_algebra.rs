//! Bigraded dimension tables and their refinement by characters of a cyclic group.
//!
//! A character of `C_n` is indexed by `j mod n`: it sends the fixed generator to
//! `ζ_n^j`. Every table in the crate uses this one convention.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Table of Hodge numbers `h[p][q]` for `0 <= p, q <= dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HodgeDiamond {
    dim: usize,
    h: Vec<Vec<u64>>,
}

impl HodgeDiamond {
    pub fn zero(dim: usize) -> Self {
        HodgeDiamond {
            dim,
            h: vec![vec![0; dim + 1]; dim + 1],
        }
    }

    /// Builds a diamond from explicit rows; every row must have `dim + 1` entries.
    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("diamond rows must form a square table".into()));
        }
        Ok(HodgeDiamond { dim: n - 1, h: rows })
    }

    /// The diamond `1; 0 0; 1 20 1; 0 0; 1` of a K3 surface.
    pub fn k3() -> Self {
        let mut d = HodgeDiamond::zero(2);
        d.h[0][0] = 1;
        d.h[2][0] = 1;
        d.h[0][2] = 1;
        d.h[1][1] = 20;
        d.h[2][2] = 1;
        d
    }

    pub fn elliptic_curve() -> Self {
        HodgeDiamond {
            dim: 1,
            h: vec![vec![1, 1], vec![1, 1]],
        }
    }

    pub fn point() -> Self {
        HodgeDiamond { dim: 0, h: vec![vec![1]] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, p: usize, q: usize) -> u64 {
        self.h.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, p: usize, q: usize, value: u64) {
        self.h[p][q] = value;
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.h
    }

    /// True when `h[p][q] == h[q][p]` everywhere.
    pub fn is_hodge_symmetric(&self) -> bool {
        (0..=self.dim).all(|p| (0..=self.dim).all(|q| self.h[p][q] == self.h[q][p]))
    }

    /// True when `h[p][q] == h[d-p][d-q]` everywhere.
    pub fn is_serre_symmetric(&self) -> bool {
        let d = self.dim;
        (0..=d).all(|p| (0..=d).all(|q| self.h[p][q] == self.h[d - p][d - q]))
    }

    pub fn total(&self) -> u64 {
        self.h.iter().flatten().sum()
    }

    /// Entrywise sum of two diamonds of equal dimension.
    pub fn plus(&self, other: &HodgeDiamond) -> Result<HodgeDiamond> {
        if self.dim != other.dim {
            return Err(Error::Invalid(format!(
                "cannot add diamonds of dimension {} and {}",
                self.dim, other.dim
            )));
        }
        let mut out = self.clone();
        for p in 0..=self.dim {
            for q in 0..=self.dim {
                out.h[p][q] += other.h[p][q];
            }
        }
        Ok(out)
    }

    /// Plain Künneth product of diamonds, ignoring any group action.
    pub fn kunneth(&self, other: &HodgeDiamond) -> HodgeDiamond {
        let mut out = HodgeDiamond::zero(self.dim + other.dim);
        for p1 in 0..=self.dim {
            for q1 in 0..=self.dim {
                for p2 in 0..=other.dim {
                    for q2 in 0..=other.dim {
                        out.h[p1 + p2][q1 + q2] += self.h[p1][q1] * other.h[p2][q2];
                    }
                }
            }
        }
        out
    }
}

/// Alternating sum `Σ (-1)^{p+q} h[p][q]`.
pub fn euler_characteristic(d: &HodgeDiamond) -> i64 {
    let mut e = 0i64;
    for p in 0..=d.dim {
        for q in 0..=d.dim {
            let v = d.h[p][q] as i64;
            if (p + q) % 2 == 0 {
                e += v;
            } else {
                e -= v;
            }
        }
    }
    e
}

/// Adds `contribution[p][q]` into `d[p + shift][q + shift]`.
///
/// Entries that would land outside the target diamond signal local data that
/// cannot come from a crepant quotient, and are rejected.
pub fn add_shifted(d: &HodgeDiamond, contribution: &HodgeDiamond, shift: usize) -> Result<HodgeDiamond> {
    let mut out = d.clone();
    for p in 0..=contribution.dim {
        for q in 0..=contribution.dim {
            let v = contribution.h[p][q];
            if v == 0 {
                continue;
            }
            let (tp, tq) = (p + shift, q + shift);
            if tp > d.dim || tq > d.dim {
                return Err(Error::ShiftOutOfRange { p: tp, q: tq, dim: d.dim });
            }
            out.h[tp][tq] += v;
        }
    }
    Ok(out)
}

/// Multiplicities of the characters `ζ_n^j` in a representation of `C_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterVector {
    modulus: u32,
    mult: Vec<u64>,
}

impl CharacterVector {
    pub fn zero(modulus: u32) -> Self {
        assert!(modulus >= 1, "character modulus must be positive");
        CharacterVector {
            modulus,
            mult: vec![0; modulus as usize],
        }
    }

    /// Builds a vector from explicit multiplicities; the modulus is their count.
    pub fn new(mult: Vec<u64>) -> Self {
        assert!(!mult.is_empty(), "character modulus must be positive");
        CharacterVector {
            modulus: mult.len() as u32,
            mult,
        }
    }

    /// `count` copies of the single character `j mod n`.
    pub fn single(modulus: u32, j: i64, count: u64) -> Self {
        let mut v = CharacterVector::zero(modulus);
        v.add(j, count);
        v
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn get(&self, j: i64) -> u64 {
        self.mult[self.index(j)]
    }

    pub fn add(&mut self, j: i64, count: u64) {
        let i = self.index(j);
        self.mult[i] += count;
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.mult
    }

    pub fn total(&self) -> u64 {
        self.mult.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&c| c == 0)
    }

    fn index(&self, j: i64) -> usize {
        j.rem_euclid(self.modulus as i64) as usize
    }

    /// The complex conjugate representation: character `j` becomes `-j`.
    pub fn conjugate(&self) -> Self {
        let mut out = CharacterVector::zero(self.modulus);
        for (j, &c) in self.mult.iter().enumerate() {
            out.add(-(j as i64), c);
        }
        out
    }

    pub fn scaled(&self, factor: u64) -> Self {
        CharacterVector {
            modulus: self.modulus,
            mult: self.mult.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn sum(&self, other: &CharacterVector) -> Result<Self> {
        check_modulus(self, other)?;
        Ok(CharacterVector {
            modulus: self.modulus,
            mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect(),
        })
    }

    /// Induces a representation of the index-`s` subgroup `⟨α^s⟩ ≅ C_{n/s}` up to `C_n`.
    ///
    /// `self` is indexed by characters of the subgroup with respect to its
    /// generator `α^s`. A character `t` of the subgroup induces the `s`
    /// characters `j ≡ t (mod n/s)` of `C_n`.
    pub fn induced(&self, modulus: u32) -> Result<Self> {
        if modulus % self.modulus != 0 {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: modulus,
            });
        }
        let index = modulus / self.modulus;
        let mut out = CharacterVector::zero(modulus);
        for (t, &c) in self.mult.iter().enumerate() {
            for i in 0..index {
                out.add(t as i64 + (i * self.modulus) as i64, c);
            }
        }
        Ok(out)
    }

    /// Permutation representation of `C_n` on a single orbit of size `orbit_size`.
    pub fn permutation(modulus: u32, orbit_size: u32) -> Result<Self> {
        if orbit_size == 0 || modulus % orbit_size != 0 {
            return Err(Error::Invalid(format!(
                "orbit size {orbit_size} does not divide the group order {modulus}"
            )));
        }
        CharacterVector::single(modulus / orbit_size, 0, 1).induced(modulus)
    }
}

impl fmt::Display for CharacterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.mult.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_modulus(a: &CharacterVector, b: &CharacterVector) -> Result<()> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch {
            left: a.modulus,
            right: b.modulus,
        });
    }
    Ok(())
}

/// Dimension of the invariant subspace of `a ⊗ b`: `Σ_j a[j]·b[-j]`.
pub fn invariant_pairing(a: &CharacterVector, b: &CharacterVector) -> Result<u64> {
    check_modulus(a, b)?;
    Ok((0..a.modulus as i64).map(|j| a.get(j) * b.get(-j)).sum())
}

/// Cohomology of a variety with a `C_n` action, refined by bidegree and character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedCharacterTable {
    dim: usize,
    modulus: u32,
    cells: Vec<Vec<CharacterVector>>,
}

impl BigradedCharacterTable {
    pub fn zero(dim: usize, modulus: u32) -> Self {
        BigradedCharacterTable {
            dim,
            modulus,
            cells: vec![vec![CharacterVector::zero(modulus); dim + 1]; dim + 1],
        }
    }

    /// The one-point table: only `(0,0)`, trivial character, dimension 1.
    pub fn point(modulus: u32) -> Self {
        let mut t = BigradedCharacterTable::zero(0, modulus);
        t.cells[0][0].add(0, 1);
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn cell(&self, p: usize, q: usize) -> &CharacterVector {
        &self.cells[p][q]
    }

    pub fn add(&mut self, p: usize, q: usize, j: i64, count: u64) {
        self.cells[p][q].add(j, count);
    }

    /// Diamond of total dimensions, forgetting the characters.
    pub fn total_diamond(&self) -> HodgeDiamond {
        let mut d = HodgeDiamond::zero(self.dim);
        for p in 0..=self.dim {
            for q in 0..=self.dim {
                d.h[p][q] = self.cells[p][q].total();
            }
        }
        d
    }
}

/// Künneth product of two character tables: bidegrees add and characters multiply.
pub fn kunneth_character_product(
    a: &BigradedCharacterTable,
    b: &BigradedCharacterTable,
) -> Result<BigradedCharacterTable> {
    if a.modulus != b.modulus {
        return Err(Error::ModulusMismatch {
            left: a.modulus,
            right: b.modulus,
        });
    }
    let n = a.modulus as i64;
    let mut out = BigradedCharacterTable::zero(a.dim + b.dim, a.modulus);
    for p1 in 0..=a.dim {
        for q1 in 0..=a.dim {
            let ca = &a.cells[p1][q1];
            if ca.is_zero() {
                continue;
            }
            for p2 in 0..=b.dim {
                for q2 in 0..=b.dim {
                    let cb = &b.cells[p2][q2];
                    for j1 in 0..n {
                        let m1 = ca.get(j1);
                        if m1 == 0 {
                            continue;
                        }
                        for j2 in 0..n {
                            let m2 = cb.get(j2);
                            if m2 != 0 {
                                out.cells[p1 + p2][q1 + q2].add(j1 + j2, m1 * m2);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The character-0 slice of a table.
pub fn invariant_diamond(t: &BigradedCharacterTable) -> HodgeDiamond {
    let mut d = HodgeDiamond::zero(t.dim);
    for p in 0..=t.dim {
        for q in 0..=t.dim {
            d.h[p][q] = t.cells[p][q].get(0);
        }
    }
    d
}
