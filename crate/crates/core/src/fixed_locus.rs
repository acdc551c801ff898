//! Fixed-locus data for a K3 surface with a purely non-symplectic automorphism
//! `α_S` of order `n`, together with the matching elliptic curve fixture.
//!
//! Fixed loci are keyed by subgroup: the record for the subgroup of order `d`
//! describes `Fix(α_S^{n/d})`, which is also the fixed set of every other
//! generator of that subgroup. Orbits are taken under the whole group `C_n`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclic_action::{check_supported_order, proper_subgroup_orders, GroupElement};
use crate::error::{Error, Result};
use crate::hodge_algebra::CharacterVector;

/// Second Betti number of a K3 surface.
pub const K3_B2: u32 = 22;

/// Dimensions of the eigenspaces `H²(S,ℂ)_{ζ_n^j}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EigenspaceDims(Vec<u32>);

impl EigenspaceDims {
    pub fn new(dims: Vec<u32>) -> Self {
        EigenspaceDims(dims)
    }

    pub fn modulus(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn get(&self, j: i64) -> u32 {
        self.0[j.rem_euclid(self.0.len() as i64) as usize]
    }

    /// Dimension of the invariant part.
    pub fn r(&self) -> u32 {
        self.0[0]
    }

    /// Dimension of the eigenspace containing the period.
    pub fn m(&self) -> u32 {
        self.0.get(1).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

/// An orbit of curves, all of the same genus, inside one fixed-locus record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveOrbit {
    #[serde(default = "one")]
    pub orbit_size: u32,
    pub genus: u32,
    /// Order of the action of the orbit stabilizer on a member curve.
    #[serde(default = "one")]
    pub residual_order: u32,
    /// Genus of the quotient of a member by its residual cyclic action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_genus: Option<u32>,
    /// Characters of `H^{1,0}` of a member under the stabilizer `⟨α^s⟩ ≅ C_{n/s}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub char_dims: Option<Vec<u64>>,
    /// Number of identical orbits.
    #[serde(default = "one")]
    pub count: u32,
}

/// An orbit of isolated fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointOrbit {
    #[serde(default = "one")]
    pub orbit_size: u32,
    /// Local exponents of the generator `α_S^{n/d}` of the record's subgroup.
    #[serde(rename = "type")]
    pub point_type: [u32; 2],
    #[serde(default = "one")]
    pub count: u32,
}

fn one() -> u32 {
    1
}

impl CurveOrbit {
    /// `count` orbits of curves pointwise fixed by the whole stabilizer.
    pub fn fixed(genus: u32, count: u32) -> Self {
        CurveOrbit {
            orbit_size: 1,
            genus,
            residual_order: 1,
            quotient_genus: None,
            char_dims: None,
            count,
        }
    }

    pub fn invariant(genus: u32, residual_order: u32, quotient_genus: u32, count: u32) -> Self {
        CurveOrbit {
            orbit_size: 1,
            genus,
            residual_order,
            quotient_genus: Some(quotient_genus),
            char_dims: None,
            count,
        }
    }

    pub fn permuted(genus: u32, orbit_size: u32, count: u32) -> Self {
        CurveOrbit {
            orbit_size,
            genus,
            residual_order: 1,
            quotient_genus: None,
            char_dims: None,
            count,
        }
    }

    pub fn with_char_dims(mut self, dims: Vec<u64>) -> Self {
        self.char_dims = Some(dims);
        self
    }

    /// Quotient genus, which equals the genus when the residual action is trivial.
    pub fn effective_quotient_genus(&self) -> u32 {
        if self.residual_order == 1 {
            self.genus
        } else {
            self.quotient_genus.unwrap_or(self.genus)
        }
    }

    pub fn curves(&self) -> u64 {
        self.orbit_size as u64 * self.count as u64
    }
}

impl PointOrbit {
    pub fn new(orbit_size: u32, point_type: [u32; 2], count: u32) -> Self {
        PointOrbit {
            orbit_size,
            point_type,
            count,
        }
    }

    pub fn points(&self) -> u64 {
        self.orbit_size as u64 * self.count as u64
    }
}

/// Fixed locus of the subgroup of order `order`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupFixedRecord {
    pub order: u32,
    #[serde(default)]
    pub curves: Vec<CurveOrbit>,
    #[serde(default)]
    pub points: Vec<PointOrbit>,
}

impl SubgroupFixedRecord {
    pub fn empty(order: u32) -> Self {
        SubgroupFixedRecord {
            order,
            ..Default::default()
        }
    }

    fn push_curve(&mut self, c: CurveOrbit) {
        if c.count > 0 {
            self.curves.push(c);
        }
    }

    fn push_point(&mut self, p: PointOrbit) {
        if p.count > 0 {
            self.points.push(p);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.curves.iter().all(|c| c.count == 0) && self.points.iter().all(|p| p.count == 0)
    }

    pub fn curve_count(&self) -> u64 {
        self.curves.iter().map(CurveOrbit::curves).sum()
    }

    pub fn point_count(&self) -> u64 {
        self.points.iter().map(PointOrbit::points).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct K3Config {
    pub order: u32,
    pub eigenspace_dims: EigenspaceDims,
    pub records: Vec<SubgroupFixedRecord>,
}

impl K3Config {
    /// The record for the subgroup of order `d`, or an empty record when absent.
    pub fn record(&self, d: u32) -> SubgroupFixedRecord {
        self.records
            .iter()
            .find(|r| r.order == d)
            .cloned()
            .unwrap_or_else(|| SubgroupFixedRecord::empty(d))
    }

    pub fn r(&self) -> u32 {
        self.eigenspace_dims.r()
    }

    pub fn m(&self) -> u32 {
        self.eigenspace_dims.m()
    }
}

/// Fixed points of the powers of `α_E` on the elliptic curve, as orbits under `C_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticFixture {
    pub order: u32,
    orbits: Vec<(u32, Vec<u32>)>,
}

impl EllipticFixture {
    pub fn orbit_sizes(&self, d: u32) -> &[u32] {
        self.orbits
            .iter()
            .find(|(o, _)| *o == d)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn fixed_point_count(&self, d: u32) -> u64 {
        self.orbit_sizes(d).iter().map(|&s| s as u64).sum()
    }

    /// Permutation representation of `C_n` on the fixed points of the subgroup of order `d`.
    pub fn permutation_characters(&self, d: u32) -> CharacterVector {
        let mut v = CharacterVector::zero(self.order);
        for &s in self.orbit_sizes(d) {
            v = v
                .sum(&CharacterVector::permutation(self.order, s).expect("fixture orbit divides n"))
                .expect("same modulus");
        }
        v
    }
}

/// Hardcoded fixed-point data of `E` for `y² = x³ + x` (order 4), `y² = x³ + 1`
/// (orders 3 and 6) and any curve with its negation (order 2).
pub fn elliptic_fixture(n: u32) -> Result<EllipticFixture> {
    check_supported_order(n)?;
    let orbits = match n {
        2 => vec![(2, vec![1, 1, 1, 1])],
        3 => vec![(3, vec![1, 1, 1])],
        4 => vec![(2, vec![1, 1, 2]), (4, vec![1, 1])],
        6 => vec![(2, vec![1, 3]), (3, vec![1, 2]), (6, vec![1])],
        _ => unreachable!(),
    };
    Ok(EllipticFixture { order: n, orbits })
}

/// Characters of `H^{1,0}` of one member of a curve orbit under its stabilizer
/// `⟨α^s⟩ ≅ C_{n/s}`, indexed with respect to the generator `α^s`.
///
/// A residual action of order 3 splits the non-invariant forms evenly between
/// the two faithful characters unless explicit dimensions are given.
pub fn curve_character_dims(c: &CurveOrbit, n: u32) -> Result<CharacterVector> {
    if c.orbit_size == 0 || n % c.orbit_size != 0 {
        return Err(Error::Invalid(format!(
            "orbit size {} does not divide {n}",
            c.orbit_size
        )));
    }
    let stab = n / c.orbit_size;
    let rho = c.residual_order;
    if !(1..=3).contains(&rho) {
        return Err(Error::UnsupportedResidualOrder(rho));
    }
    if stab % rho != 0 {
        return Err(Error::Invalid(format!(
            "residual order {rho} does not divide the stabilizer order {stab}"
        )));
    }
    let g = c.genus as u64;
    let gq = c.effective_quotient_genus() as u64;
    if gq > g {
        return Err(Error::Invalid(format!("quotient genus {gq} exceeds genus {g}")));
    }
    if let Some(dims) = &c.char_dims {
        let v = CharacterVector::new(dims.clone());
        if v.modulus() != stab || v.total() != g || v.get(0) != gq {
            return Err(Error::Invalid(format!(
                "explicit character dimensions {v} must have {stab} entries, sum {g} and invariant part {gq}"
            )));
        }
        let step = (stab / rho) as usize;
        if dims.iter().enumerate().any(|(j, &c)| c != 0 && j % step != 0) {
            return Err(Error::Invalid(format!(
                "explicit character dimensions {v} are not trivial on the pointwise stabilizer"
            )));
        }
        return Ok(v);
    }
    let step = (stab / rho) as i64;
    let mut v = CharacterVector::single(stab, 0, gq);
    match rho {
        1 => {}
        2 => v.add(step, g - gq),
        3 => {
            let rest = g - gq;
            if rest % 2 == 1 {
                return Err(Error::UnbalancedSplit(rest));
            }
            v.add(step, rest / 2);
            v.add(2 * step, rest / 2);
        }
        _ => unreachable!(),
    }
    Ok(v)
}

/// Topological Euler characteristic of `Fix(α_S^j)`.
pub fn euler_fixed_set(cfg: &K3Config, j: GroupElement) -> i64 {
    if j.is_identity() {
        return 24;
    }
    let rec = cfg.record(j.order());
    let curves: i64 = rec
        .curves
        .iter()
        .map(|c| c.curves() as i64 * (2 - 2 * c.genus as i64))
        .sum();
    curves + rec.point_count() as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strictness {
    /// Type invariants only; enough for the orbifold engine.
    Engine,
    /// Additionally the shape relations under which the closed formulas hold.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub level: Strictness,
    pub severity: Severity,
    pub message: String,
}

impl Violation {
    fn engine(message: impl Into<String>) -> Self {
        Violation {
            level: Strictness::Engine,
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn engine_warning(message: impl Into<String>) -> Self {
        Violation {
            level: Strictness::Engine,
            severity: Severity::Warning,
            message: message.into(),
        }
    }

    pub fn closed_form(message: impl Into<String>) -> Self {
        Violation {
            level: Strictness::ClosedForm,
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn closed_form_warning(message: impl Into<String>) -> Self {
        Violation {
            level: Strictness::ClosedForm,
            severity: Severity::Warning,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.level {
            Strictness::Engine => "engine",
            Strictness::ClosedForm => "closed-form",
        };
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "[{level} {sev}] {}", self.message)
    }
}

/// Checks a configuration; violations are returned as data.
pub fn validate(cfg: &K3Config, strictness: Strictness) -> Vec<Violation> {
    let mut out = engine_violations(cfg);
    if strictness == Strictness::ClosedForm && !out.iter().any(Violation::is_error) {
        match derive_invariants(cfg) {
            Ok((_, vs)) => out.extend(vs),
            Err(vs) => out.extend(vs),
        }
    }
    out
}

fn engine_violations(cfg: &K3Config) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = cfg.order;
    if check_supported_order(n).is_err() {
        out.push(Violation::engine(format!("unsupported order {n}")));
        return out;
    }
    let dims = &cfg.eigenspace_dims;
    if dims.modulus() != n {
        out.push(Violation::engine(format!(
            "eigenspace_dims must have {n} entries, found {}",
            dims.modulus()
        )));
    } else {
        let total: u32 = dims.as_slice().iter().sum();
        if total != K3_B2 {
            out.push(Violation::engine(format!(
                "eigenspace dims must sum to 22 (found {total})"
            )));
        }
        for j in 1..n {
            if dims.get(j as i64) != dims.get(-(j as i64)) {
                out.push(Violation::engine(format!(
                    "eigenspace dims must be conjugate-symmetric: d[{j}] = {} but d[{}] = {}",
                    dims.get(j as i64),
                    n - j,
                    dims.get(-(j as i64))
                )));
                break;
            }
        }
        if dims.r() < 1 {
            out.push(Violation::engine("the invariant eigenspace must be nonzero (d[0] >= 1)"));
        }
        let need = if n == 2 { 2 } else { 1 };
        if dims.m() < need {
            out.push(Violation::engine(format!(
                "d[1] must be at least {need}: it contains the period{}",
                if n == 2 { " and its conjugate" } else { "" }
            )));
        }
    }

    let orders = proper_subgroup_orders(n);
    let mut seen = BTreeMap::new();
    for (i, rec) in cfg.records.iter().enumerate() {
        let d = rec.order;
        if !orders.contains(&d) {
            out.push(Violation::engine(format!(
                "subgroups[{i}]: order {d} is not a divisor of {n} greater than 1"
            )));
            continue;
        }
        if seen.insert(d, i).is_some() {
            out.push(Violation::engine(format!("subgroups[{i}]: duplicate record for order {d}")));
        }
        let cofactor = n / d;
        for (ci, c) in rec.curves.iter().enumerate() {
            let at = format!("subgroups[{i}].curves[{ci}]");
            if c.orbit_size == 0 || c.residual_order == 0 {
                out.push(Violation::engine(format!("{at}: orbit_size and residual_order must be positive")));
                continue;
            }
            if !(1..=3).contains(&c.residual_order) {
                out.push(Violation::engine(format!(
                    "{at}: residual order {} is not supported (expected 1, 2 or 3)",
                    c.residual_order
                )));
                continue;
            }
            if cofactor % (c.orbit_size * c.residual_order) != 0 {
                out.push(Violation::engine(format!(
                    "{at}: orbit_size * residual_order = {} must divide n/d = {cofactor}",
                    c.orbit_size * c.residual_order
                )));
                continue;
            }
            match (c.residual_order, c.quotient_genus) {
                (1, Some(q)) if q != c.genus => out.push(Violation::engine(format!(
                    "{at}: quotient_genus {q} must equal the genus {} when residual_order is 1",
                    c.genus
                ))),
                (r, None) if r > 1 => out.push(Violation::engine(format!(
                    "{at}: quotient_genus is required when residual_order is {r}"
                ))),
                (_, Some(q)) if q > c.genus => out.push(Violation::engine(format!(
                    "{at}: quotient_genus {q} exceeds genus {}",
                    c.genus
                ))),
                _ => {
                    if let Err(e) = curve_character_dims(c, n) {
                        out.push(Violation::engine(format!("{at}: {e}")));
                    }
                }
            }
        }
        for (pi, p) in rec.points.iter().enumerate() {
            let at = format!("subgroups[{i}].points[{pi}]");
            if p.orbit_size == 0 || cofactor % p.orbit_size != 0 {
                out.push(Violation::engine(format!(
                    "{at}: orbit_size {} must divide n/d = {cofactor}",
                    p.orbit_size
                )));
            }
            let [t1, t2] = p.point_type;
            if t1 % n == 0 || t2 % n == 0 {
                out.push(Violation::engine(format!(
                    "{at}: type ({t1},{t2}) has a trivial direction, so the point is not isolated"
                )));
            } else if (t1 + t2) % n != cofactor % n {
                out.push(Violation::engine(format!(
                    "{at}: type ({t1},{t2}) must satisfy t1 + t2 = {cofactor} mod {n}"
                )));
            } else if t1 % cofactor != 0 || t2 % cofactor != 0 {
                out.push(Violation::engine(format!(
                    "{at}: type ({t1},{t2}) is not an action of order {d}"
                )));
            }
        }
    }
    if !out.iter().any(Violation::is_error) {
        out.extend(nesting_warnings(cfg));
    }
    out
}

/// Components whose stabilizer is larger than the record's subgroup must also
/// appear in the record of that larger subgroup.
fn nesting_warnings(cfg: &K3Config) -> Vec<Violation> {
    let n = cfg.order;
    let mut out = Vec::new();
    for d in proper_subgroup_orders(n) {
        let rec = cfg.record(d);
        let mut need_curves: BTreeMap<(u32, (u32, u32, u32, u32)), u64> = BTreeMap::new();
        for c in &rec.curves {
            let pointwise = n / (c.orbit_size * c.residual_order);
            if pointwise > d {
                let key = (c.orbit_size, c.residual_order, c.genus, c.effective_quotient_genus());
                *need_curves.entry((pointwise, key)).or_default() += c.count as u64;
            }
        }
        for ((big, key), want) in need_curves {
            let have: u64 = cfg
                .record(big)
                .curves
                .iter()
                .filter(|c| (c.orbit_size, c.residual_order, c.genus, c.effective_quotient_genus()) == key)
                .map(|c| c.count as u64)
                .sum();
            if have < want {
                out.push(Violation::engine_warning(format!(
                    "record {d} lists {want} curve orbit(s) of genus {} fixed by the subgroup of order {big}, but that record has only {have}",
                    key.2
                )));
            }
        }
        let mut need_points: BTreeMap<(u32, u32, [u32; 2]), u64> = BTreeMap::new();
        for p in &rec.points {
            let stab = n / p.orbit_size;
            if stab > d {
                let mut t = p.point_type.map(|t| t % n);
                t.sort_unstable();
                *need_points.entry((stab, p.orbit_size, t)).or_default() += p.count as u64;
            }
        }
        for ((big, s, t), want) in need_points {
            let power = (n / d) / (n / big);
            let have: u64 = cfg
                .record(big)
                .points
                .iter()
                .filter(|p| p.orbit_size == s)
                .filter(|p| {
                    let mut tt = p.point_type.map(|x| (x * power) % n);
                    tt.sort_unstable();
                    tt == t
                })
                .map(|p| p.count as u64)
                .sum();
            if have < want {
                out.push(Violation::engine_warning(format!(
                    "record {d} lists {want} point orbit(s) of type ({},{}) fixed by the subgroup of order {big}, but that record has only {have} matching",
                    t[0], t[1]
                )));
            }
        }
    }
    out
}

/// Type of the highest-genus curve `D` in `Fix(α_S²)` for order 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveType {
    /// Pointwise fixed by `α_S`.
    First,
    /// Invariant under `α_S` but not pointwise fixed.
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Order2Invariants {
    pub r: i64,
    pub curve_genera: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Order3Invariants {
    pub r: i64,
    pub m: i64,
    /// Number of fixed curves, the highest-genus curve `C` included.
    pub k: i64,
    pub n_points: i64,
    #[serde(rename = "g_C")]
    pub g_c: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Order4Invariants {
    pub r: i64,
    pub m: i64,
    pub k: i64,
    pub a: i64,
    pub b: i64,
    pub n1: i64,
    pub n2: i64,
    #[serde(rename = "g_D")]
    pub g_d: i64,
    #[serde(rename = "D_type")]
    pub d_type: CurveType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Order6Invariants {
    pub r: i64,
    pub m: i64,
    pub l: i64,
    pub k: i64,
    #[serde(rename = "N")]
    pub big_n: i64,
    pub a: i64,
    pub b: i64,
    pub n_prime: i64,
    pub p25: i64,
    pub p34: i64,
    /// Isolated points of `γ_S²`; defaults to `p25 + 2 n'`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(rename = "g_D")]
    pub g_d: i64,
    #[serde(rename = "g_G")]
    pub g_g: i64,
    #[serde(rename = "g_G_quot")]
    pub g_g_quot: i64,
    #[serde(rename = "g_F1")]
    pub g_f1: i64,
    #[serde(rename = "g_F1_quot")]
    pub g_f1_quot: i64,
    #[serde(rename = "g_F2")]
    pub g_f2: i64,
    #[serde(rename = "g_F2_quot")]
    pub g_f2_quot: i64,
}

impl Order6Invariants {
    pub fn isolated_points_of_square(&self) -> i64 {
        self.n.unwrap_or(self.p25 + 2 * self.n_prime)
    }
}

/// The named invariants used by the closed formulas, per order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedInvariants {
    Order2 { r: i64, m: i64, curves: i64, genus_sum: i64 },
    Order3(Order3Invariants),
    Order4(Order4Invariants),
    Order6(Order6Invariants),
}

fn nonneg(name: &str, v: i64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Invalid(format!("{name} must be a nonnegative integer (got {v})")))
}

fn dims_from(values: &[i64]) -> Result<EigenspaceDims> {
    let mut out = Vec::with_capacity(values.len());
    for (j, &v) in values.iter().enumerate() {
        out.push(nonneg(&format!("eigenspace dimension d[{j}]"), v)?);
    }
    Ok(EigenspaceDims::new(out))
}

pub fn from_invariants_order2(r: i64, curve_genera: &[u32]) -> Result<K3Config> {
    let mut rec = SubgroupFixedRecord::empty(2);
    let mut by_genus: BTreeMap<u32, u32> = BTreeMap::new();
    for &g in curve_genera {
        *by_genus.entry(g).or_default() += 1;
    }
    for (g, c) in by_genus.into_iter().rev() {
        rec.push_curve(CurveOrbit::fixed(g, c));
    }
    Ok(K3Config {
        order: 2,
        eigenspace_dims: dims_from(&[r, K3_B2 as i64 - r])?,
        records: vec![rec],
    })
}

pub fn from_invariants_order3(inv: &Order3Invariants) -> Result<K3Config> {
    let k = nonneg("k", inv.k)?;
    let g = nonneg("g_C", inv.g_c)?;
    if k == 0 && g > 0 {
        return Err(Error::Invalid("g_C > 0 requires at least one fixed curve".into()));
    }
    let mut rec = SubgroupFixedRecord::empty(3);
    if k > 0 {
        rec.push_curve(CurveOrbit::fixed(g, 1));
        rec.push_curve(CurveOrbit::fixed(0, k - 1));
    }
    rec.push_point(PointOrbit::new(1, [2, 2], nonneg("n_points", inv.n_points)?));
    Ok(K3Config {
        order: 3,
        eigenspace_dims: dims_from(&[inv.r, inv.m, inv.m])?,
        records: vec![rec],
    })
}

pub fn from_invariants_order4(inv: &Order4Invariants) -> Result<K3Config> {
    let k = nonneg("k", inv.k)?;
    let a = nonneg("a", inv.a)?;
    let b = nonneg("b", inv.b)?;
    let points = nonneg("n1 + n2", inv.n1 + inv.n2)?;
    nonneg("n1", inv.n1)?;
    nonneg("n2", inv.n2)?;
    let g = nonneg("g_D", inv.g_d)?;
    let dims = dims_from(&[inv.r, inv.m, K3_B2 as i64 - inv.r - 2 * inv.m, inv.m])?;

    let mut fix1 = SubgroupFixedRecord::empty(4);
    let mut fix2 = SubgroupFixedRecord::empty(2);
    match inv.d_type {
        CurveType::First => {
            if k == 0 {
                return Err(Error::Invalid(
                    "a curve D of the first type needs k >= 1 curves fixed by α_S".into(),
                ));
            }
            for rec in [&mut fix1, &mut fix2] {
                rec.push_curve(CurveOrbit::fixed(g, 1));
                rec.push_curve(CurveOrbit::fixed(0, k - 1));
            }
            fix2.push_curve(CurveOrbit::invariant(0, 2, 0, b));
        }
        CurveType::Second => {
            if b == 0 {
                return Err(Error::Invalid("a curve D of the second type needs b >= 1".into()));
            }
            // Riemann-Hurwitz for D -> D/α_S, branched at the n2 points on D.
            let twice = inv.g_d + 1 - inv.n2 / 2;
            if inv.n2 % 2 != 0 || twice < 0 || twice % 2 != 0 {
                return Err(Error::Invalid(format!(
                    "no double cover of a genus {} curve is branched at n2 = {} points",
                    inv.g_d, inv.n2
                )));
            }
            for rec in [&mut fix1, &mut fix2] {
                rec.push_curve(CurveOrbit::fixed(0, k));
            }
            fix2.push_curve(CurveOrbit::invariant(g, 2, (twice / 2) as u32, 1));
            fix2.push_curve(CurveOrbit::invariant(0, 2, 0, b - 1));
        }
    }
    fix2.push_curve(CurveOrbit::permuted(0, 2, a));
    fix1.push_point(PointOrbit::new(1, [2, 3], points));
    Ok(K3Config {
        order: 4,
        eigenspace_dims: dims,
        records: vec![fix2, fix1],
    })
}

/// Curve of a residual order-3 action, with an explicit split when the
/// non-invariant part is odd.
fn order3_residual_curve(g: u32, gq: u32) -> Result<CurveOrbit> {
    if gq > g {
        return Err(Error::Invalid(format!("quotient genus {gq} exceeds genus {g}")));
    }
    let c = CurveOrbit::invariant(g, 3, gq, 1);
    let rest = (g - gq) as u64;
    if rest % 2 == 1 {
        let mut dims = vec![0u64; 6];
        dims[0] = gq as u64;
        dims[2] = rest.div_ceil(2);
        dims[4] = rest / 2;
        return Ok(c.with_char_dims(dims));
    }
    Ok(c)
}

pub fn from_invariants_order6(inv: &Order6Invariants) -> Result<K3Config> {
    let l = nonneg("l", inv.l)?;
    let k = nonneg("k", inv.k)?;
    let big_n = nonneg("N", inv.big_n)?;
    let a = nonneg("a", inv.a)?;
    let b = nonneg("b", inv.b)?;
    let n_prime = nonneg("n_prime", inv.n_prime)?;
    let p25 = nonneg("p25", inv.p25)?;
    let p34 = nonneg("p34", inv.p34)?;
    let g_d = nonneg("g_D", inv.g_d)?;
    let g_g = nonneg("g_G", inv.g_g)?;
    let g_gq = nonneg("g_G_quot", inv.g_g_quot)?;
    let f = [
        (nonneg("g_F1", inv.g_f1)?, nonneg("g_F1_quot", inv.g_f1_quot)?),
        (nonneg("g_F2", inv.g_f2)?, nonneg("g_F2_quot", inv.g_f2_quot)?),
    ];
    let n_sq = nonneg("n", inv.isolated_points_of_square())?;
    let extra_points = n_sq
        .checked_sub(p25 + 2 * n_prime)
        .ok_or_else(|| Error::Invalid(format!("n = {n_sq} is smaller than p25 + 2 n' = {}", p25 + 2 * n_prime)))?;
    if g_d > 0 && l == 0 {
        return Err(Error::Invalid("g_D > 0 requires l >= 1".into()));
    }
    let dims = dims_from(&[
        inv.r,
        inv.m,
        inv.m,
        K3_B2 as i64 - inv.r - 4 * inv.m,
        inv.m,
        inv.m,
    ])?;

    let fixed_by_gamma = |rec: &mut SubgroupFixedRecord| {
        if g_d > 0 {
            rec.push_curve(CurveOrbit::fixed(g_d, 1));
            rec.push_curve(CurveOrbit::fixed(0, l - 1));
        } else {
            rec.push_curve(CurveOrbit::fixed(0, l));
        }
    };

    let mut fix1 = SubgroupFixedRecord::empty(6);
    fixed_by_gamma(&mut fix1);
    fix1.push_point(PointOrbit::new(1, [2, 5], p25));
    fix1.push_point(PointOrbit::new(1, [3, 4], p34));

    // Fix(γ_S²): the l curves of Fix(γ_S), b swapped pairs, and curves on which
    // γ_S acts as an involution; G is one of the latter unless G = D.
    let mut fix2 = SubgroupFixedRecord::empty(3);
    fixed_by_gamma(&mut fix2);
    fix2.push_curve(CurveOrbit::permuted(0, 2, b));
    let involuted = k
        .checked_sub(l + 2 * b)
        .ok_or_else(|| Error::Invalid(format!("k = {k} is smaller than l + 2b = {}", l + 2 * b)))?;
    let g_is_d = g_d > 0 && g_g == g_d;
    let mut rational_involuted = involuted;
    if !g_is_d && (g_g > 0 || g_gq > 0) {
        if involuted == 0 {
            return Err(Error::Invalid(
                "G has positive genus but k leaves no curve on which γ_S acts as an involution".into(),
            ));
        }
        if g_gq > g_g {
            return Err(Error::Invalid(format!("g_G_quot {g_gq} exceeds g_G {g_g}")));
        }
        fix2.push_curve(CurveOrbit::invariant(g_g, 2, g_gq, 1));
        rational_involuted -= 1;
    }
    fix2.push_curve(CurveOrbit::invariant(0, 2, 0, rational_involuted));
    fix2.push_point(PointOrbit::new(1, [4, 4], p25 + extra_points));
    fix2.push_point(PointOrbit::new(2, [4, 4], n_prime));

    // Fix(γ_S³): the l curves of Fix(γ_S), a triples, and curves with a residual
    // action of order 3 carrying F₁, F₂ unless one of them is D.
    let mut fix3 = SubgroupFixedRecord::empty(2);
    fixed_by_gamma(&mut fix3);
    fix3.push_curve(CurveOrbit::permuted(0, 3, a));
    let mut residual = big_n
        .checked_sub(l + 3 * a)
        .ok_or_else(|| Error::Invalid(format!("N = {big_n} is smaller than l + 3a = {}", l + 3 * a)))?;
    let mut d_used = false;
    for (g, gq) in f {
        if g_d > 0 && !d_used && g == g_d {
            d_used = true;
            continue;
        }
        if g > 0 || gq > 0 {
            if residual == 0 {
                return Err(Error::Invalid(
                    "F₁/F₂ have positive genus but N leaves no curve with a residual action of order 3".into(),
                ));
            }
            fix3.push_curve(order3_residual_curve(g, gq)?);
            residual -= 1;
        }
    }
    fix3.push_curve(CurveOrbit::invariant(0, 3, 0, residual));

    Ok(K3Config {
        order: 6,
        eigenspace_dims: dims,
        records: vec![fix3, fix2, fix1],
    })
}

/// Reads the named invariants off a configuration and checks the shape
/// relations under which the closed formulas were proved.
///
/// Returns the invariants with any warnings, or the blocking violations.
pub fn derive_invariants(
    cfg: &K3Config,
) -> std::result::Result<(NamedInvariants, Vec<Violation>), Vec<Violation>> {
    match cfg.order {
        2 => Ok(derive_order2(cfg)),
        3 => derive_order3(cfg),
        4 => derive_order4(cfg),
        6 => derive_order6(cfg),
        n => Err(vec![Violation::closed_form(format!("unsupported order {n}"))]),
    }
}

fn derive_order2(cfg: &K3Config) -> (NamedInvariants, Vec<Violation>) {
    let rec = cfg.record(2);
    let curves = rec.curve_count() as i64;
    let genus_sum = rec.curves.iter().map(|c| c.curves() as i64 * c.genus as i64).sum();
    (
        NamedInvariants::Order2 {
            r: cfg.r() as i64,
            m: cfg.m() as i64,
            curves,
            genus_sum,
        },
        Vec::new(),
    )
}

fn derive_order3(cfg: &K3Config) -> std::result::Result<(NamedInvariants, Vec<Violation>), Vec<Violation>> {
    let rec = cfg.record(3);
    let mut warnings = Vec::new();
    let positive: u64 = rec.curves.iter().filter(|c| c.genus > 0).map(CurveOrbit::curves).sum();
    if positive > 1 {
        warnings.push(Violation::closed_form_warning(format!(
            "{positive} fixed curves have positive genus; the closed formula counts only the highest one"
        )));
    }
    if rec.is_empty() {
        return Err(vec![Violation::closed_form(
            "the fixed locus of an order-3 automorphism is nonempty",
        )]);
    }
    let dims = &cfg.eigenspace_dims;
    if dims.r() + 2 * dims.m() != K3_B2 {
        return Err(vec![Violation::closed_form("r + 2m must equal 22")]);
    }
    let inv = Order3Invariants {
        r: cfg.r() as i64,
        m: cfg.m() as i64,
        k: rec.curve_count() as i64,
        n_points: rec.point_count() as i64,
        g_c: rec.curves.iter().map(|c| c.genus as i64).max().unwrap_or(0),
    };
    Ok((NamedInvariants::Order3(inv), warnings))
}

/// Expands curve orbits of a record into individual orbit entries, highest genus first.
fn orbits_by_genus(rec: &SubgroupFixedRecord) -> Vec<CurveOrbit> {
    let mut all: Vec<CurveOrbit> = rec
        .curves
        .iter()
        .flat_map(|c| std::iter::repeat_n(CurveOrbit { count: 1, ..c.clone() }, c.count as usize))
        .collect();
    // Ties prefer pointwise-fixed curves, then invariant ones, then permuted ones.
    all.sort_by_key(|c| (std::cmp::Reverse(c.genus), c.orbit_size, c.residual_order));
    all
}

fn derive_order4(cfg: &K3Config) -> std::result::Result<(NamedInvariants, Vec<Violation>), Vec<Violation>> {
    let fix1 = cfg.record(4);
    let fix2 = cfg.record(2);
    let mut errs = Vec::new();

    let k = fix1.curve_count() as i64;
    let points = fix1.point_count() as i64;
    let h: i64 = fix1.curves.iter().map(|c| c.count as i64 * (1 - c.genus as i64)).sum();
    let big_n = fix2.curve_count() as i64;
    let first: i64 = fix2
        .curves
        .iter()
        .filter(|c| c.orbit_size == 1 && c.residual_order == 1)
        .map(|c| c.count as i64)
        .sum();
    let b: i64 = fix2
        .curves
        .iter()
        .filter(|c| c.orbit_size == 1 && c.residual_order == 2)
        .map(|c| c.count as i64)
        .sum();
    let a: i64 = fix2
        .curves
        .iter()
        .filter(|c| c.orbit_size == 2)
        .map(|c| c.count as i64)
        .sum();

    let ordered = orbits_by_genus(&fix2);
    let Some(d) = ordered.first().cloned() else {
        return Err(vec![Violation::closed_form("the fixed locus of α_S² contains no curve D")]);
    };
    if ordered.len() == 2 && ordered.iter().all(|c| c.genus == 1 && c.orbit_size == 1) {
        errs.push(Violation::closed_form(
            "the fixed locus of α_S² is a union of two elliptic curves",
        ));
    }
    if ordered.iter().skip(1).any(|c| c.genus > 0) {
        errs.push(Violation::closed_form(
            "only the curve D may have positive genus in the fixed locus of α_S²",
        ));
    }
    let g_d = d.genus as i64;
    let d_type = match (d.orbit_size, d.residual_order) {
        (1, 1) => CurveType::First,
        (1, 2) => CurveType::Second,
        _ => {
            errs.push(Violation::closed_form(
                "D of the third type (swapped with another curve) is not covered by the closed formulas",
            ));
            CurveType::First
        }
    };
    let n2 = match d_type {
        CurveType::First => 0,
        // α_S-fixed points on D, by Riemann-Hurwitz for D -> D/α_S.
        CurveType::Second => 2 * g_d - 4 * d.effective_quotient_genus() as i64 + 2,
    };
    let n1 = points - n2;
    if n1 < 0 || n2 < 0 {
        errs.push(Violation::closed_form(format!(
            "the {points} isolated points of α_S cannot include n2 = {n2} points on D"
        )));
    }
    if big_n != k + b + 2 * a {
        errs.push(Violation::closed_form(format!(
            "N = k + b + 2a fails: N = {big_n}, k = {k}, b = {b}, a = {a} ({first} curves of Fix(α_S²) are pointwise fixed by α_S)"
        )));
    }
    match d_type {
        CurveType::First => {
            if h != k - g_d {
                errs.push(Violation::closed_form(format!("h = k - g(D) fails: h = {h}, k = {k}, g(D) = {g_d}")));
            }
            if n1 != 2 * h + 4 {
                errs.push(Violation::closed_form(format!("n1 = 2h + 4 fails: n1 = {n1}, h = {h}")));
            }
            if 2 * b != n1 {
                errs.push(Violation::closed_form(format!("b = n1/2 fails: b = {b}, n1 = {n1}")));
            }
        }
        CurveType::Second => {
            if h != k {
                errs.push(Violation::closed_form(format!("h = k fails: h = {h}, k = {k}")));
            }
            if n1 + n2 != 2 * h + 4 {
                errs.push(Violation::closed_form(format!(
                    "n1 + n2 = 2h + 4 fails: n1 = {n1}, n2 = {n2}, h = {h}"
                )));
            }
            if 2 * (b - 1) != n1 {
                errs.push(Violation::closed_form(format!("b = n1/2 + 1 fails: b = {b}, n1 = {n1}")));
            }
            if n2 % 2 != 0 {
                errs.push(Violation::closed_form(format!("n2 = {n2} must be even")));
            }
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    Ok((
        NamedInvariants::Order4(Order4Invariants {
            r: cfg.r() as i64,
            m: cfg.m() as i64,
            k,
            a,
            b,
            n1,
            n2,
            g_d,
            d_type,
        }),
        Vec::new(),
    ))
}

fn derive_order6(cfg: &K3Config) -> std::result::Result<(NamedInvariants, Vec<Violation>), Vec<Violation>> {
    let fix1 = cfg.record(6);
    let fix2 = cfg.record(3);
    let fix3 = cfg.record(2);
    let mut errs = Vec::new();

    let dims = &cfg.eigenspace_dims;
    if dims.r() + 5 * dims.m() != K3_B2 {
        errs.push(Violation::closed_form(format!(
            "r + 5m = 22 fails: r = {}, m = {}",
            dims.r(),
            dims.m()
        )));
    }

    let l = fix1.curve_count() as i64;
    let mut p25 = 0i64;
    let mut p34 = 0i64;
    for p in &fix1.points {
        let mut t = p.point_type.map(|x| x % 6);
        t.sort_unstable();
        match t {
            [2, 5] => p25 += p.points() as i64,
            [3, 4] => p34 += p.points() as i64,
            _ => errs.push(Violation::closed_form(format!(
                "isolated point of γ_S of type ({},{})",
                t[0], t[1]
            ))),
        }
    }
    let d_list = orbits_by_genus(&fix1);
    let g_d = d_list.first().map_or(0, |c| c.genus as i64);
    if d_list.iter().skip(1).any(|c| c.genus > 0) {
        errs.push(Violation::closed_form("only D may have positive genus in the fixed locus of γ_S"));
    }
    if g_d > 1 {
        errs.push(Violation::closed_form(format!("g(D) must be 0 or 1, found {g_d}")));
    }

    let k = fix2.curve_count() as i64;
    let b: i64 = fix2.curves.iter().filter(|c| c.orbit_size == 2).map(|c| c.count as i64).sum();
    let n = fix2.point_count() as i64;
    let n_prime: i64 = fix2.points.iter().filter(|p| p.orbit_size == 2).map(|p| p.count as i64).sum();
    if n != p25 + 2 * n_prime {
        errs.push(Violation::closed_form(format!(
            "n = p25 + 2n' fails: n = {n}, p25 = {p25}, n' = {n_prime}"
        )));
    }
    let g_list = orbits_by_genus(&fix2);
    let (g_g, g_gq, g_fixed) = g_list
        .first()
        .map_or((0, 0, false), |c| (c.genus as i64, c.effective_quotient_genus() as i64, c.residual_order == 1));
    if g_list.iter().skip(1).any(|c| c.genus > 0) {
        errs.push(Violation::closed_form("only G may have positive genus in the fixed locus of γ_S²"));
    }

    let big_n = fix3.curve_count() as i64;
    let a: i64 = fix3.curves.iter().filter(|c| c.orbit_size == 3).map(|c| c.count as i64).sum();
    let f_list = orbits_by_genus(&fix3);
    if f_list.iter().skip(2).any(|c| c.genus > 0) {
        errs.push(Violation::closed_form("only F₁ and F₂ may have positive genus in the fixed locus of γ_S³"));
    }
    if f_list.iter().take(2).any(|c| c.orbit_size != 1 && c.genus > 0) {
        errs.push(Violation::closed_form("F₁ and F₂ must be invariant under γ_S"));
    }
    let f: Vec<(i64, i64, bool)> = (0..2)
        .map(|i| {
            f_list.get(i).map_or((0, 0, false), |c| {
                (c.genus as i64, c.effective_quotient_genus() as i64, c.residual_order == 1)
            })
        })
        .collect();
    if f[0].0 > 0 && f[1].0 > 0 && (f[0].0 != 1 || f[1].0 != 1) {
        errs.push(Violation::closed_form(format!(
            "if both F₁ and F₂ have positive genus they are elliptic; found genera {} and {}",
            f[0].0, f[1].0
        )));
    }
    if g_d == 1 {
        if !(g_g == 1 && g_fixed) {
            errs.push(Violation::closed_form("g(D) = 1 requires G = D"));
        }
        if !(f[0].0 == 1 && f[0].2) {
            errs.push(Violation::closed_form("g(D) = 1 requires F₁ = D"));
        }
    } else {
        if g_g > 0 && g_fixed {
            errs.push(Violation::closed_form("G is pointwise fixed by γ_S but D is rational"));
        }
        if f.iter().any(|&(g, _, fixed)| g > 0 && fixed) {
            errs.push(Violation::closed_form("F₁ or F₂ is pointwise fixed by γ_S but D is rational"));
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    Ok((
        NamedInvariants::Order6(Order6Invariants {
            r: dims.r() as i64,
            m: dims.m() as i64,
            l,
            k,
            big_n,
            a,
            b,
            n_prime,
            p25,
            p34,
            n: Some(n),
            g_d,
            g_g,
            g_g_quot: g_gq,
            g_f1: f[0].0,
            g_f1_quot: f[0].1,
            g_f2: f[1].0,
            g_f2_quot: f[1].1,
        }),
        Vec::new(),
    ))
}
