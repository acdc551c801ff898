//! Chen–Ruan Hodge numbers of `(S × E)/C_n`, which equal the Hodge numbers of
//! any crepant resolution.
//!
//! Each nontrivial element contributes its fixed components, shifted by the age
//! and restricted to the `C_n`-invariant part. Invariants are computed by pairing
//! characters, never by diagonalizing matrices.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{self, ClosedFormValues};
use crate::cyclic_action::{age, elliptic_exponent, intersection_class, GroupElement, LocalAction};
use crate::error::{Error, Result};
use crate::fixed_locus::{curve_character_dims, elliptic_fixture, euler_fixed_set, K3Config, Violation};
use crate::hodge_algebra::{
    add_shifted, euler_characteristic, invariant_diamond, invariant_pairing, kunneth_character_product,
    BigradedCharacterTable, CharacterVector, HodgeDiamond,
};

/// Character table of `H^{*,*}(S)` under `α_S`.
pub fn k3_character_table(cfg: &K3Config) -> BigradedCharacterTable {
    let n = cfg.order;
    let mut t = BigradedCharacterTable::zero(2, n);
    t.add(0, 0, 0, 1);
    t.add(2, 2, 0, 1);
    t.add(2, 0, 1, 1);
    t.add(0, 2, -1, 1);
    for j in 0..n as i64 {
        let mut dim = cfg.eigenspace_dims.get(j) as u64;
        // the classes of ω_S and its conjugate sit in H^{2,0} and H^{0,2}
        if j == 1 {
            dim = dim.saturating_sub(1);
        }
        if j == n as i64 - 1 {
            dim = dim.saturating_sub(1);
        }
        t.add(1, 1, j, dim);
    }
    t
}

/// Character table of `H^{*,*}(E)` under `α_E^{n-1}`.
pub fn elliptic_character_table(n: u32) -> BigradedCharacterTable {
    let mut t = BigradedCharacterTable::zero(1, n);
    t.add(0, 0, 0, 1);
    t.add(1, 1, 0, 1);
    t.add(1, 0, -1, 1);
    t.add(0, 1, 1, 1);
    t
}

/// Invariant part of `H^{*,*}(S × E)`.
pub fn untwisted_diamond(cfg: &K3Config) -> Result<HodgeDiamond> {
    let prod = kunneth_character_product(&k3_character_table(cfg), &elliptic_character_table(cfg.order))?;
    Ok(invariant_diamond(&prod))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SClass {
    Curves {
        orbit_size: u32,
        genus: u32,
        residual_order: u32,
        quotient_genus: u32,
        count: u32,
    },
    Points {
        orbit_size: u32,
        exponents: [u32; 2],
        count: u32,
    },
}

/// One S-side class times the fixed points of the same element on `E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentClass {
    pub s_class: SClass,
    pub e_orbit_sizes: Vec<u32>,
    pub e_exponent: u32,
    pub age: u32,
    pub increment: HodgeDiamond,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorContribution {
    pub element: GroupElement,
    pub classes: Vec<ComponentClass>,
}

impl SectorContribution {
    pub fn total(&self) -> HodgeDiamond {
        let mut d = HodgeDiamond::zero(3);
        for c in &self.classes {
            d = d.plus(&c.increment).expect("sector increments are threefold diamonds");
        }
        d
    }
}

fn integral_age(element: GroupElement, l: &LocalAction) -> Result<u32> {
    let a = age(l);
    if !a.is_integer() {
        return Err(Error::NonCrepant {
            element: element.residue(),
            num: *a.numer(),
            den: *a.denom(),
        });
    }
    Ok(a.to_integer() as u32)
}

pub fn sector_contribution(cfg: &K3Config, j: GroupElement) -> Result<SectorContribution> {
    let n = cfg.order;
    if j.modulus() != n {
        return Err(Error::ModulusMismatch {
            left: j.modulus(),
            right: n,
        });
    }
    if j.is_identity() {
        return Err(Error::Invalid("the identity has no twisted sector".into()));
    }
    let g = j.residue().gcd(&n);
    let d = n / g;
    let u = j.residue() / g;
    let rec = cfg.record(d);
    let fixture = elliptic_fixture(n)?;
    let e_sizes = fixture.orbit_sizes(d).to_vec();
    let e_side = fixture.permutation_characters(d);
    let e_exp = elliptic_exponent(n, j.residue());

    let mut classes = Vec::new();
    if e_sizes.is_empty() {
        return Ok(SectorContribution { element: j, classes });
    }

    for c in &rec.curves {
        if c.count == 0 {
            continue;
        }
        let local = LocalAction::new(n, &[0, j.residue() as i64, e_exp as i64]);
        let a = integral_age(j, &local)?;
        if a != 1 {
            return Err(Error::InternalConsistency(format!(
                "curve component of age {a} in the sector of {}",
                j.residue()
            )));
        }
        let perm = CharacterVector::permutation(n, c.orbit_size)?;
        let h10 = curve_character_dims(c, n)?;
        let h01 = h10.conjugate();
        let pair = |v: &CharacterVector| -> Result<u64> {
            Ok(invariant_pairing(v, &e_side)? * c.count as u64)
        };
        let mut piece = HodgeDiamond::zero(1);
        piece.set(0, 0, pair(&perm)?);
        piece.set(1, 1, pair(&perm)?);
        piece.set(1, 0, pair(&h10.induced(n)?)?);
        piece.set(0, 1, pair(&h01.induced(n)?)?);
        classes.push(ComponentClass {
            s_class: SClass::Curves {
                orbit_size: c.orbit_size,
                genus: c.genus,
                residual_order: c.residual_order,
                quotient_genus: c.effective_quotient_genus(),
                count: c.count,
            },
            e_orbit_sizes: e_sizes.clone(),
            e_exponent: e_exp,
            age: a,
            increment: add_shifted(&HodgeDiamond::zero(3), &piece, a as usize)?,
        });
    }

    for p in &rec.points {
        if p.count == 0 {
            continue;
        }
        let exps = [(p.point_type[0] * u) % n, (p.point_type[1] * u) % n];
        let local = LocalAction::new(n, &[exps[0] as i64, exps[1] as i64, e_exp as i64]);
        let a = integral_age(j, &local)?;
        let perm = CharacterVector::permutation(n, p.orbit_size)?;
        let mut piece = HodgeDiamond::zero(0);
        piece.set(0, 0, invariant_pairing(&perm, &e_side)? * p.count as u64);
        classes.push(ComponentClass {
            s_class: SClass::Points {
                orbit_size: p.orbit_size,
                exponents: exps,
                count: p.count,
            },
            e_orbit_sizes: e_sizes.clone(),
            e_exponent: e_exp,
            age: a,
            increment: add_shifted(&HodgeDiamond::zero(3), &piece, a as usize)?,
        });
    }
    Ok(SectorContribution { element: j, classes })
}

/// All twisted sectors, in order of the element's residue.
pub fn twisted_sectors(cfg: &K3Config) -> Result<Vec<SectorContribution>> {
    GroupElement::elements(cfg.order)
        .filter(|g| !g.is_identity())
        .map(|g| sector_contribution(cfg, g))
        .collect()
}

fn check_calabi_yau_shape(d: &HodgeDiamond) -> Result<()> {
    let fixed = [((0, 0), 1), ((3, 3), 1), ((3, 0), 1), ((0, 3), 1), ((1, 0), 0), ((0, 1), 0), ((2, 0), 0), ((0, 2), 0)];
    for ((p, q), want) in fixed {
        if d.get(p, q) != want {
            return Err(Error::InternalConsistency(format!(
                "h^{{{p},{q}}} = {} but a Calabi-Yau threefold has {want}",
                d.get(p, q)
            )));
        }
    }
    if !d.is_hodge_symmetric() || !d.is_serre_symmetric() {
        return Err(Error::InternalConsistency(format!(
            "orbifold diamond {:?} is not self-dual",
            d.rows()
        )));
    }
    Ok(())
}

pub fn orbifold_hodge_diamond(cfg: &K3Config) -> Result<HodgeDiamond> {
    let mut d = untwisted_diamond(cfg)?;
    for s in twisted_sectors(cfg)? {
        d = d.plus(&s.total())?;
    }
    check_calabi_yau_shape(&d)?;
    Ok(d)
}

/// `(1/n) Σ_{j,k} e(Fix(α^j) ∩ Fix(α^k))` on `S × E`.
pub fn orbifold_euler_pairsum(cfg: &K3Config) -> Result<i64> {
    let n = cfg.order;
    let fixture = elliptic_fixture(n)?;
    let mut total = 0i64;
    for j in GroupElement::elements(n) {
        for k in GroupElement::elements(n) {
            let c = intersection_class(j, k)?;
            let e_e = if c.is_identity() {
                0
            } else {
                fixture.fixed_point_count(c.order()) as i64
            };
            total += euler_fixed_set(cfg, c) * e_e;
        }
    }
    if total % n as i64 != 0 {
        return Err(Error::InternalConsistency(format!(
            "pair sum {total} is not divisible by the group order {n}"
        )));
    }
    Ok(total / n as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub lhs: i64,
    pub rhs: i64,
}

impl CheckResult {
    fn new(name: &str, lhs: i64, rhs: i64) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: lhs == rhs,
            lhs,
            rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineValues {
    pub h11: i64,
    pub h21: i64,
    pub euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub diamond: HodgeDiamond,
    pub engine: EngineValues,
    pub pairsum: i64,
    /// The closed-form values, or the reasons they do not apply.
    pub closed_form: std::result::Result<ClosedFormValues, Vec<Violation>>,
    pub checks: Vec<CheckResult>,
}

impl CrossCheck {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn crosscheck(cfg: &K3Config) -> Result<CrossCheck> {
    let diamond = orbifold_hodge_diamond(cfg)?;
    let engine = EngineValues {
        h11: diamond.get(1, 1) as i64,
        h21: diamond.get(2, 1) as i64,
        euler: euler_characteristic(&diamond),
    };
    let pairsum = orbifold_euler_pairsum(cfg)?;
    let mut checks = vec![CheckResult::new("euler_vs_pairsum", engine.euler, pairsum)];
    let cy = if engine.euler % 2 == 0 {
        engine.h11 - engine.euler / 2
    } else {
        i64::MIN
    };
    checks.push(CheckResult::new("cy_euler_relation", engine.h21, cy));
    let closed_form = closed_forms::from_config(cfg);
    if let Ok(cf) = &closed_form {
        checks.push(CheckResult::new("closed_form_h11", engine.h11, cf.h11));
        checks.push(CheckResult::new("closed_form_h21", engine.h21, cf.h21));
        checks.push(CheckResult::new("closed_form_euler", pairsum, cf.euler));
    }
    Ok(CrossCheck {
        diamond,
        engine,
        pairsum,
        closed_form,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_locus::*;

    fn worked_order4() -> K3Config {
        from_invariants_order4(&Order4Invariants {
            r: 11,
            m: 3,
            k: 2,
            a: 1,
            b: 3,
            n1: 6,
            n2: 0,
            g_d: 1,
            d_type: CurveType::First,
        })
        .unwrap()
    }

    fn h11_of(s: &SectorContribution) -> u64 {
        s.total().get(1, 1)
    }

    #[test]
    fn untwisted_part_is_r_plus_one_and_m_minus_one() {
        for cfg in [
            worked_order4(),
            from_invariants_order2(9, &[3, 0]).unwrap(),
        ] {
            let d = untwisted_diamond(&cfg).unwrap();
            assert_eq!(d.get(1, 1), cfg.r() as u64 + 1);
            assert_eq!(d.get(2, 1), cfg.m() as u64 - 1);
            assert_eq!(d.get(0, 0), 1);
            assert_eq!(d.get(3, 0), 1);
            assert_eq!(d.get(1, 0), 0);
            assert_eq!(d.get(2, 0), 0);
        }
    }

    #[test]
    fn order2_instance() {
        let cfg = from_invariants_order2(9, &[3, 0]).unwrap();
        let d = orbifold_hodge_diamond(&cfg).unwrap();
        assert_eq!((d.get(1, 1), d.get(2, 1)), (18, 24));
        assert_eq!(orbifold_euler_pairsum(&cfg).unwrap(), -12);
    }

    #[test]
    fn worked_order4_sectors() {
        let cfg = worked_order4();
        let s1 = sector_contribution(&cfg, GroupElement::new(4, 1)).unwrap();
        let s2 = sector_contribution(&cfg, GroupElement::new(4, 2)).unwrap();
        let s3 = sector_contribution(&cfg, GroupElement::new(4, 3)).unwrap();
        assert_eq!(h11_of(&s1), 4);
        assert_eq!(s1.total().get(2, 2), 4 + 2 * 6);
        assert_eq!(h11_of(&s3), 4 + 12);
        assert_eq!(h11_of(&s2), 3 * 2 + 3 * 3 + 4);
        let d = orbifold_hodge_diamond(&cfg).unwrap();
        assert_eq!((d.get(1, 1), d.get(2, 1)), (51, 9));
        assert_eq!(orbifold_euler_pairsum(&cfg).unwrap(), 84);
        let cc = crosscheck(&cfg).unwrap();
        assert!(cc.all_passed(), "{:?}", cc.checks);
        assert_eq!(cc.checks.len(), 5);
    }

    #[test]
    fn curve_ages_are_one() {
        let cfg = worked_order4();
        for s in twisted_sectors(&cfg).unwrap() {
            for c in &s.classes {
                if matches!(c.s_class, SClass::Curves { .. }) {
                    assert_eq!(c.age, 1);
                } else {
                    assert!(c.age == 1 || c.age == 2);
                }
            }
        }
    }

    #[test]
    fn empty_locus_has_no_twisted_part() {
        let cfg = from_invariants_order2(10, &[]).unwrap();
        for s in twisted_sectors(&cfg).unwrap() {
            assert!(s.classes.is_empty());
        }
        let cc = crosscheck(&cfg).unwrap();
        assert_eq!(cc.engine, EngineValues { h11: 11, h21: 11, euler: 0 });
        assert!(cc.all_passed());
    }

    #[test]
    fn non_crepant_point_type_is_rejected() {
        let mut cfg = worked_order4();
        cfg.records[1].points[0].point_type = [1, 1];
        assert!(matches!(
            sector_contribution(&cfg, GroupElement::new(4, 1)),
            Err(Error::NonCrepant { .. })
        ));
    }

    #[test]
    fn order6_gamma_cubed_sector() {
        let inv = Order6Invariants {
            r: 7,
            m: 3,
            l: 1,
            k: 4,
            big_n: 3,
            a: 0,
            b: 1,
            n_prime: 0,
            p25: 2,
            p34: 2,
            n: None,
            g_d: 1,
            g_g: 1,
            g_g_quot: 1,
            g_f1: 1,
            g_f1_quot: 1,
            g_f2: 0,
            g_f2_quot: 0,
        };
        let cfg = from_invariants_order6(&inv).unwrap();
        let s3 = sector_contribution(&cfg, GroupElement::new(6, 3)).unwrap().total();
        assert_eq!(s3.get(1, 1) as i64, 2 * inv.big_n - 2 * inv.a);
        assert_eq!(s3.get(2, 1) as i64, 2 * inv.g_d + inv.g_f2 + inv.g_f2_quot);
        let d = orbifold_hodge_diamond(&cfg).unwrap();
        assert_eq!((d.get(1, 1), d.get(2, 1)), (38, 10));
        assert_eq!(orbifold_euler_pairsum(&cfg).unwrap(), 56);
    }
}
