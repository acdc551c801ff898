//! Closed formulas for the Hodge numbers of the resolved quotients, per order.

use serde::{Deserialize, Serialize};

use crate::cyclic_action::check_supported_order;
use crate::error::{Error, Result};
use crate::fixed_locus::{
    derive_invariants, CurveType, K3Config, NamedInvariants, Order3Invariants, Order4Invariants,
    Order6Invariants, Violation, K3_B2,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgePair {
    pub h11: i64,
    pub h21: i64,
}

impl HodgePair {
    fn checked(h11: i64, h21: i64) -> Result<Self> {
        if h11 < 0 || h21 < 0 {
            return Err(Error::Precondition(format!(
                "negative Hodge number ({h11}, {h21}) from inconsistent invariants"
            )));
        }
        Ok(HodgePair { h11, h21 })
    }

    pub fn euler(&self) -> i64 {
        2 * (self.h11 - self.h21)
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

pub fn hodge_order2(r: i64, m: i64, big_n: i64, n_prime: i64) -> Result<HodgePair> {
    require(r + m == K3_B2 as i64, || format!("r + m = 22 fails: r = {r}, m = {m}"))?;
    require(r >= 1 && m >= 1, || format!("r and m must be positive: r = {r}, m = {m}"))?;
    HodgePair::checked(r + 1 + 4 * big_n, m - 1 + 4 * n_prime)
}

/// The classical Borcea–Voisin numbers, in terms of the number `N` of fixed
/// curves and their total genus `N'`.
///
/// This is the orientation produced by the order-2 formula together with
/// `r = 10 + N - N'`; the opposite orientation circulates in print.
pub fn classic_bv(big_n: i64, n_prime: i64) -> HodgePair {
    HodgePair {
        h11: 11 + 5 * big_n - n_prime,
        h21: 11 + 5 * n_prime - big_n,
    }
}

pub fn hodge_order3(r: i64, m: i64, k: i64, n_points: i64, g_c: i64) -> Result<HodgePair> {
    require(r + 2 * m == K3_B2 as i64, || format!("r + 2m = 22 fails: r = {r}, m = {m}"))?;
    HodgePair::checked(r + 1 + 3 * n_points + 6 * k, m - 1 + 6 * g_c)
}

pub fn hodge_order4(inv: &Order4Invariants) -> Result<HodgePair> {
    let Order4Invariants {
        r,
        m,
        k,
        a,
        b,
        n1,
        n2,
        g_d,
        d_type,
    } = *inv;
    let h11 = 1 + r + 7 * k + 3 * b + 2 * (n1 + n2) + 4 * a;
    match d_type {
        CurveType::First => {
            let h = k - g_d;
            require(n2 == 0, || format!("n2 = 0 fails for D of the first type: n2 = {n2}"))?;
            require(n1 == 2 * h + 4, || format!("n1 = 2h + 4 fails: n1 = {n1}, h = {h}"))?;
            require(2 * b == n1, || format!("b = n1/2 fails: b = {b}, n1 = {n1}"))?;
            HodgePair::checked(h11, m - 1 + 7 * g_d)
        }
        CurveType::Second => {
            if n2 % 2 != 0 {
                return Err(Error::Parity(format!("n2 = {n2} must be even for D of the second type")));
            }
            require(n1 + n2 == 2 * k + 4, || format!("n1 + n2 = 2h + 4 fails: n1 = {n1}, n2 = {n2}, h = {k}"))?;
            require(2 * (b - 1) == n1, || format!("b = n1/2 + 1 fails: b = {b}, n1 = {n1}"))?;
            HodgePair::checked(h11, m + 2 * g_d - n2 / 2)
        }
    }
}

/// Eigenspace dimensions `(r, m)` forced by the fixed locus of an order-4
/// automorphism, with `h = Σ (1 - g(C))` over the curves fixed by `α_S`.
pub fn aas_relations_order4(k: i64, a: i64, b: i64, g_d: i64, h: i64) -> Result<(i64, i64)> {
    let r2 = 12 + k + 2 * a + b - g_d + 4 * h;
    let m2 = 12 - k - 2 * a - b + g_d;
    if r2 % 2 != 0 || m2 % 2 != 0 {
        return Err(Error::Parity(format!(
            "2r = {r2} and 2m = {m2} must both be even"
        )));
    }
    let (r, m) = (r2 / 2, m2 / 2);
    require(r >= 0 && m >= 0, || format!("negative eigenspace dimension: r = {r}, m = {m}"))?;
    Ok((r, m))
}

pub fn hodge_order6(inv: &Order6Invariants) -> Result<HodgePair> {
    let i = inv;
    require(i.r + 5 * i.m == K3_B2 as i64, || format!("r + 5m = 22 fails: r = {}, m = {}", i.r, i.m))?;
    require((0..=1).contains(&i.g_d), || format!("g(D) must be 0 or 1, found {}", i.g_d))?;
    let h11 = i.r + 1 + 2 * i.l + 2 * i.big_n - 2 * i.b + 4 * i.k - 2 * i.a
        + 3 * i.n_prime
        + 3 * i.p25
        + i.p34;
    let h21 = if i.g_d >= 1 {
        require(i.g_g == 1 && i.g_f1 == 1, || {
            format!("g(D) = 1 needs G = F₁ = D, found g(G) = {}, g(F₁) = {}", i.g_g, i.g_f1)
        })?;
        i.m - 1 + 8 * i.g_d + i.g_f2 + i.g_f2_quot
    } else {
        i.m - 1 + 2 * i.g_g + 2 * i.g_g_quot + i.g_f1 + i.g_f1_quot + i.g_f2 + i.g_f2_quot
    };
    HodgePair::checked(h11, h21)
}

/// Orbifold Euler number from `e(Fix(α_S^c))`, one value per divisor `c < n`
/// of `n` in ascending order.
pub fn euler_formula(order: u32, e_s: &[i64]) -> Result<i64> {
    check_supported_order(order)?;
    let coeffs: &[i64] = match order {
        2 => &[6],
        3 => &[8],
        4 => &[6, 3],
        6 => &[4, 4, 2],
        _ => unreachable!(),
    };
    if e_s.len() != coeffs.len() {
        return Err(Error::Invalid(format!(
            "order {order} needs {} fixed-set Euler numbers, got {}",
            coeffs.len(),
            e_s.len()
        )));
    }
    Ok(coeffs.iter().zip(e_s).map(|(c, e)| c * e).sum())
}

/// `h^{2,1} = h^{1,1} - e/2` on a Calabi–Yau threefold.
pub fn cy_euler_relation(h11: i64, e: i64) -> Result<i64> {
    if e % 2 != 0 {
        return Err(Error::Parity(format!("Euler number {e} is odd")));
    }
    Ok(h11 - e / 2)
}

/// Left-hand side of the linear relation among the order-6 invariants that
/// comes from comparing two expressions for `h^{2,1}`; zero when consistent.
pub fn corollary_order6(inv: &Order6Invariants) -> i64 {
    let n = inv.isolated_points_of_square();
    -inv.m + inv.r + 2 - 2 * inv.l - 2 * inv.b - 2 * inv.a + 3 * inv.n_prime + inv.p25 - inv.p34 - 2 * n
        + 4 * inv.g_d
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormValues {
    pub h11: i64,
    pub h21: i64,
    pub euler: i64,
}

/// Evaluates the closed formula for a configuration, reading the named
/// invariants off its fixed-locus records.
pub fn from_config(cfg: &K3Config) -> std::result::Result<ClosedFormValues, Vec<Violation>> {
    let (inv, _) = derive_invariants(cfg)?;
    let pair = evaluate(&inv).map_err(|e| vec![Violation::closed_form(e.to_string())])?;
    Ok(ClosedFormValues {
        h11: pair.h11,
        h21: pair.h21,
        euler: pair.euler(),
    })
}

pub fn evaluate(inv: &NamedInvariants) -> Result<HodgePair> {
    match inv {
        NamedInvariants::Order2 {
            r,
            m,
            curves,
            genus_sum,
        } => hodge_order2(*r, *m, *curves, *genus_sum),
        NamedInvariants::Order3(Order3Invariants {
            r,
            m,
            k,
            n_points,
            g_c,
        }) => hodge_order3(*r, *m, *k, *n_points, *g_c),
        NamedInvariants::Order4(i) => hodge_order4(i),
        NamedInvariants::Order6(i) => hodge_order6(i),
    }
}
