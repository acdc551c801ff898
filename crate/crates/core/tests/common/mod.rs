#![allow(dead_code)]

use std::f64::consts::TAU;

use bv_hodge::fixed_locus::{
    from_invariants_order2, from_invariants_order3, from_invariants_order4, from_invariants_order6,
    CurveType, K3Config, Order3Invariants, Order4Invariants, Order6Invariants,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Genera of the curves fixed by a non-symplectic involution, with `r = 10 + N - N'`.
pub fn order2(rng: &mut ChaCha8Rng) -> (i64, Vec<u32>) {
    loop {
        let len = rng.gen_range(0..=10);
        let genera: Vec<u32> = (0..len).map(|_| rng.gen_range(0..=5)).collect();
        let big_n = genera.len() as i64;
        let np: i64 = genera.iter().map(|&g| g as i64).sum();
        let r = 10 + big_n - np;
        if (1..=20).contains(&r) {
            return (r, genera);
        }
    }
}

/// Order-3 invariants satisfying `r + 2m = 22` and the Lefschetz relation
/// `r - m + 2 = n + 2k - 2g(C)`.
pub fn order3(rng: &mut ChaCha8Rng) -> Order3Invariants {
    loop {
        let k = rng.gen_range(0..=10);
        let n_points = rng.gen_range(0..=10);
        if k + n_points == 0 {
            continue;
        }
        let g_c = if k > 0 { rng.gen_range(0..=5) } else { 0 };
        let x = n_points + 2 * k - 2 * g_c;
        if (24 - x) % 3 != 0 {
            continue;
        }
        let m = (24 - x) / 3;
        let r = 22 - 2 * m;
        if m >= 1 && r >= 1 {
            return Order3Invariants { r, m, k, n_points, g_c };
        }
    }
}

fn aas(k: i64, a: i64, b: i64, g_d: i64, h: i64) -> Option<(i64, i64)> {
    let r2 = 12 + k + 2 * a + b - g_d + 4 * h;
    let m2 = 12 - k - 2 * a - b + g_d;
    if r2 % 2 != 0 || m2 % 2 != 0 {
        return None;
    }
    let (r, m) = (r2 / 2, m2 / 2);
    (r >= 1 && m >= 1 && 22 - r - 2 * m >= 0).then_some((r, m))
}

pub fn order4(rng: &mut ChaCha8Rng, d_type: CurveType) -> Order4Invariants {
    loop {
        let g_d = rng.gen_range(0..=5);
        let a = rng.gen_range(0..=10);
        let inv = match d_type {
            CurveType::First => {
                let k = rng.gen_range(1..=10);
                let h = k - g_d;
                let n1 = 2 * h + 4;
                if n1 < 0 {
                    continue;
                }
                let b = n1 / 2;
                let Some((r, m)) = aas(k, a, b, g_d, h) else { continue };
                Order4Invariants { r, m, k, a, b, n1, n2: 0, g_d, d_type }
            }
            CurveType::Second => {
                // a rational D of the second type only counts when nothing is fixed by α_S
                let k = if g_d == 0 { 0 } else { rng.gen_range(0..=10) };
                let gq = rng.gen_range(0..=(g_d + 1) / 2);
                let n2 = 2 * g_d - 4 * gq + 2;
                let n1 = 2 * k + 4 - n2;
                if n1 < 0 {
                    continue;
                }
                let b = n1 / 2 + 1;
                let Some((r, m)) = aas(k, a, b, g_d, k) else { continue };
                Order4Invariants { r, m, k, a, b, n1, n2, g_d, d_type }
            }
        };
        if inv.b <= 10 && inv.n1 + inv.n2 <= 30 {
            return inv;
        }
    }
}

/// Order-6 invariants satisfying the combined Lefschetz relation behind the
/// pair sum; `p34` is solved for.
///
/// With `equal_quotients` every curve G, F₁, F₂ has genus equal to its
/// quotient genus.
pub fn order6(rng: &mut ChaCha8Rng, g_d: i64, equal_quotients: bool) -> Order6Invariants {
    loop {
        let m = rng.gen_range(1..=4);
        let r = 22 - 5 * m;
        let l = if g_d == 1 { rng.gen_range(1..=10) } else { rng.gen_range(0..=10) };
        let b = rng.gen_range(0..=5);
        let a = rng.gen_range(0..=3);
        let n_prime = rng.gen_range(0..=5);
        let p25 = rng.gen_range(0..=10);

        let (g_g, g_gq, f1, f2) = if g_d == 1 {
            let g2 = rng.gen_range(0..=1);
            let q2 = if equal_quotients { g2 } else { rng.gen_range(0..=g2) };
            (1, 1, (1, 1), (g2, q2))
        } else {
            let double = |rng: &mut ChaCha8Rng| {
                if equal_quotients {
                    let g = rng.gen_range(0..=1);
                    (g, g)
                } else {
                    let g = rng.gen_range(0..=5);
                    (g, rng.gen_range(0..=(g + 1) / 2))
                }
            };
            let triple = |rng: &mut ChaCha8Rng, max: i64| {
                if equal_quotients {
                    let g = rng.gen_range(0..=max.min(1));
                    (g, g)
                } else {
                    let g = rng.gen_range(0..=max);
                    (g, rng.gen_range(0..=(g + 2) / 3))
                }
            };
            let (g, q) = double(rng);
            let f1 = triple(rng, 5);
            let f2 = if f1.0 > 0 { triple(rng, 1) } else { triple(rng, 5) };
            let (f1, f2) = if f2.0 > f1.0 { (f2, f1) } else { (f1, f2) };
            (g, q, f1, f2)
        };
        let separate_g = g_d == 0 && g_g > 0;
        let positive_f = [f1, f2]
            .iter()
            .enumerate()
            .filter(|(i, f)| f.0 > 0 && !(g_d == 1 && *i == 0))
            .count() as i64;
        let c2 = rng.gen_range(0..=3) + separate_g as i64;
        let c3 = rng.gen_range(0..=3) + positive_f;
        let k = l + 2 * b + c2;
        let big_n = l + 3 * a + c3;
        let p34 = 24 - 6 * m - 2 * l - 2 * b - 2 * a - n_prime - p25
            + 2 * g_d
            + 2 * (g_g - g_gq)
            + (f1.0 - f1.1)
            + (f2.0 - f2.1);
        if !(0..=10).contains(&p34) {
            continue;
        }
        return Order6Invariants {
            r,
            m,
            l,
            k,
            big_n,
            a,
            b,
            n_prime,
            p25,
            p34,
            n: None,
            g_d,
            g_g,
            g_g_quot: g_gq,
            g_f1: f1.0,
            g_f1_quot: f1.1,
            g_f2: f2.0,
            g_f2_quot: f2.1,
        };
    }
}

/// A mix of generated configurations across all orders.
pub fn any_config(rng: &mut ChaCha8Rng) -> K3Config {
    match rng.gen_range(0..6) {
        0 => {
            let (r, g) = order2(rng);
            from_invariants_order2(r, &g).unwrap()
        }
        1 => from_invariants_order3(&order3(rng)).unwrap(),
        2 => from_invariants_order4(&order4(rng, CurveType::First)).unwrap(),
        3 => from_invariants_order4(&order4(rng, CurveType::Second)).unwrap(),
        4 => from_invariants_order6(&order6(rng, 0, false)).unwrap(),
        _ => from_invariants_order6(&order6(rng, 1, false)).unwrap(),
    }
}

#[derive(Clone, Copy)]
struct C(f64, f64);

impl C {
    fn root(k: i64, n: i64) -> C {
        let t = TAU * k as f64 / n as f64;
        C(t.cos(), t.sin())
    }
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn scale(self, s: f64) -> C {
        C(self.0 * s, self.1 * s)
    }
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
}

fn rounded(total: C, n: i64) -> u64 {
    let v = total.0 / n as f64;
    assert!(total.1.abs() < 1e-6 && (v - v.round()).abs() < 1e-6, "non-integral average {v}");
    v.round() as u64
}

/// `H^{1,0}` characters of one curve under `α^s`, written out directly.
fn curve_h10(n: i64, s: i64, g: i64, gq: i64, rho: i64, explicit: Option<&Vec<u64>>) -> Vec<(i64, i64)> {
    let stab = n / s;
    if let Some(d) = explicit {
        return d.iter().enumerate().map(|(c, &m)| (c as i64, m as i64)).collect();
    }
    match rho {
        1 => vec![(0, g)],
        2 => vec![(0, gq), (stab / 2, g - gq)],
        3 => {
            assert_eq!((g - gq) % 2, 0);
            vec![(0, gq), (stab / 3, (g - gq) / 2), (2 * stab / 3, (g - gq) / 2)]
        }
        _ => panic!("residual order {rho}"),
    }
}

/// Orbifold Hodge diamond by averaging traces over the group, component by
/// component, with every orbit written out as explicit curves and points.
pub fn oracle_diamond(cfg: &K3Config) -> [[u64; 4]; 4] {
    let n = cfg.order as i64;
    let dims: Vec<i64> = cfg.eigenspace_dims.as_slice().iter().map(|&d| d as i64).collect();
    let mut out = [[0u64; 4]; 4];

    // untwisted: characters of S and E by bidegree, as (character, multiplicity)
    let mut s_cells: Vec<((usize, usize), Vec<(i64, i64)>)> = vec![
        ((0, 0), vec![(0, 1)]),
        ((2, 2), vec![(0, 1)]),
        ((2, 0), vec![(1, 1)]),
        ((0, 2), vec![(n - 1, 1)]),
    ];
    let h11: Vec<(i64, i64)> = (0..n)
        .map(|j| {
            let mut d = dims[j as usize];
            if j == 1 {
                d -= 1;
            }
            if j == n - 1 {
                d -= 1;
            }
            (j, d)
        })
        .collect();
    s_cells.push(((1, 1), h11));
    let e_cells: Vec<((usize, usize), Vec<(i64, i64)>)> = vec![
        ((0, 0), vec![(0, 1)]),
        ((1, 1), vec![(0, 1)]),
        ((1, 0), vec![(n - 1, 1)]),
        ((0, 1), vec![(1, 1)]),
    ];
    for ((ps, qs), sv) in &s_cells {
        for ((pe, qe), ev) in &e_cells {
            let mut total = C(0.0, 0.0);
            for t in 0..n {
                let tr = |v: &Vec<(i64, i64)>| {
                    v.iter().fold(C(0.0, 0.0), |acc, &(c, m)| acc.add(C::root(c * t, n).scale(m as f64)))
                };
                total = total.add(tr(sv).mul(tr(ev)));
            }
            out[ps + pe][qs + qe] += rounded(total, n);
        }
    }

    let e_orbits: &[(i64, &[i64])] = match n {
        2 => &[(2, &[1, 1, 1, 1])],
        3 => &[(3, &[1, 1, 1])],
        4 => &[(2, &[1, 1, 2]), (4, &[1, 1])],
        6 => &[(2, &[1, 3]), (3, &[1, 2]), (6, &[1])],
        _ => unreachable!(),
    };
    for j in 1..n {
        let g = gcd(j, n);
        let d = n / g;
        let u = j / g;
        let e_exp = (n - j) % n;
        let e_sizes: Vec<i64> = e_orbits
            .iter()
            .find(|(o, _)| *o == d)
            .map(|(_, v)| v.to_vec())
            .unwrap_or_default();
        let Some(rec) = cfg.records.iter().find(|r| r.order as i64 == d) else { continue };
        // (age, bidegree of the component, trace of α^t on that cohomology)
        for c in &rec.curves {
            let s = c.orbit_size as i64;
            let age = (j + e_exp) / n;
            assert_eq!((j + e_exp) % n, 0);
            let chi = curve_h10(
                n,
                s,
                c.genus as i64,
                c.effective_quotient_genus() as i64,
                c.residual_order as i64,
                c.char_dims.as_ref(),
            );
            for (p, q) in [(0usize, 0usize), (1, 0), (0, 1), (1, 1)] {
                let mut total = C(0.0, 0.0);
                for t in 0..n {
                    // each curve and each E point is fixed by α^t exactly when its orbit size divides t
                    let mut on_curve = C(0.0, 0.0);
                    if t % s == 0 {
                        let step = t / s;
                        on_curve = match (p, q) {
                            (1, 0) => chi.iter().fold(C(0.0, 0.0), |acc, &(c, m)| {
                                acc.add(C::root(c * step, n / s).scale(m as f64))
                            }),
                            (0, 1) => chi.iter().fold(C(0.0, 0.0), |acc, &(c, m)| {
                                acc.add(C::root(-c * step, n / s).scale(m as f64))
                            }),
                            _ => C(1.0, 0.0),
                        }
                        .scale(s as f64);
                    }
                    let fixed_e = e_sizes.iter().filter(|&&se| t % se == 0).map(|&se| se).sum::<i64>();
                    total = total.add(on_curve.scale((fixed_e * c.count as i64) as f64));
                }
                out[p + age as usize][q + age as usize] += rounded(total, n);
            }
        }
        for pt in &rec.points {
            let s = pt.orbit_size as i64;
            let exps = pt.point_type.map(|t| (t as i64 * u) % n);
            let sum = exps[0] + exps[1] + e_exp;
            assert_eq!(sum % n, 0, "non-integral age");
            let age = (sum / n) as usize;
            let mut total = C(0.0, 0.0);
            for t in 0..n {
                if t % s == 0 {
                    let fixed_e = e_sizes.iter().filter(|&&se| t % se == 0).map(|&se| se).sum::<i64>();
                    total = total.add(C((s * fixed_e * pt.count as i64) as f64, 0.0));
                }
            }
            out[age][age] += rounded(total, n);
        }
    }
    out
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Lefschetz number of `α^t` on `S`, from the eigenspace dimensions only.
pub fn lefschetz(cfg: &K3Config, t: i64) -> i64 {
    let n = cfg.order as i64;
    let mut total = C(2.0, 0.0);
    for (j, &d) in cfg.eigenspace_dims.as_slice().iter().enumerate() {
        total = total.add(C::root(j as i64 * t, n).scale(d as f64));
    }
    assert!(total.1.abs() < 1e-6);
    total.0.round() as i64
}

/// Order-6 invariants whose fixed sets match the Lefschetz number of every power of `γ_S`.
pub fn order6_lefschetz(rng: &mut ChaCha8Rng, g_d: i64, equal_quotients: bool) -> Order6Invariants {
    loop {
        let inv = order6(rng, g_d, equal_quotients);
        let cfg = from_invariants_order6(&inv).unwrap();
        let ok = (1..6).all(|t| {
            bv_hodge::fixed_locus::euler_fixed_set(&cfg, bv_hodge::cyclic_action::GroupElement::new(6, t))
                == lefschetz(&cfg, t)
        });
        if ok {
            return inv;
        }
    }
}
