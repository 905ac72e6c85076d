//! Helpers shared by the integration suites: an independent congruence-based
//! isotropy oracle and a random good-BONG generator.

use dyadic_forms::blattice::Bong;
use dyadic_forms::localfield::{Elem, Field, FieldKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[allow(dead_code)]
pub const FIELDS: [&str; 5] = ["q2", "q2(sqrt(5))", "q2(sqrt(2))", "q2(sqrt(3))", "q2(sqrt(-1))"];

/// Independent brute-force isotropy oracle for z² = ax² + by²: searches for a
/// primitive residue solution modulo π^{2e+3}, grouping z² values by their
/// raw coefficient residues. Written against the raw coefficient view only.
#[allow(dead_code)]
pub fn brute_isotropic(f: &Field, a: &Elem, b: &Elem) -> bool {
    let e = f.e;
    let k = (2 * e + 3) as u32;
    // Residue systems straight from the coefficient description of O/π^k.
    let (r0, r1): (u32, u32) = match f.core.kind {
        FieldKind::Q2 => (k, 0),
        FieldKind::Unramified { .. } => (k, k),
        FieldKind::Ramified { .. } => (k.div_ceil(2), k / 2),
    };
    let basis_second: Option<Elem> = match f.core.kind {
        FieldKind::Q2 => None,
        FieldKind::Unramified { .. } => Some(Elem::generator(f.core)),
        FieldKind::Ramified { .. } => Some(f.pi),
    };
    let mut res: Vec<Elem> = Vec::new();
    for c1 in 0..(1u64 << r1) {
        for c0 in 0..(1u64 << r0) {
            let mut x = f.int(c0 as i64);
            if let Some(g) = basis_second {
                x = x.add(&f.int(c1 as i64).mul(&g));
            }
            res.push(x);
        }
    }
    // Key: reduce an integral element's raw coefficients in the (1, second)
    // basis modulo (2^r0, 2^r1). For ramified odd d the generator is g = π−1,
    // so (c0 + c1 g) = (c0 − c1) + c1·π.
    let key = |x: &Elem| -> u64 {
        let (c0, c1, den2) = x.raw();
        assert_eq!(den2, 0);
        let (a0, a1) = match f.core.kind {
            FieldKind::Q2 | FieldKind::Unramified { .. } => (c0, c1),
            FieldKind::Ramified { d } => {
                if d % 2 == 0 {
                    (c0, c1)
                } else {
                    (c0.wrapping_sub(c1), c1)
                }
            }
        };
        let m0 = (1u64 << r0) - 1;
        let m1 = if r1 == 0 { 0 } else { (1u64 << r1) - 1 };
        (a0 as u64 & m0) | ((a1 as u64 & m1) << 32)
    };
    use std::collections::HashMap;
    // z² keys, split by whether a unit z realizes them.
    let mut sq: HashMap<u64, bool> = HashMap::new();
    for z in &res {
        let zk = key(&z.mul(z));
        let unit = z.ord() == Some(0);
        let slot = sq.entry(zk).or_insert(false);
        *slot = *slot || unit;
    }
    let ax: Vec<(u64, bool)> = res
        .iter()
        .map(|x| (key(&a.mul(x).mul(x)), x.ord() == Some(0)))
        .collect();
    let by: Vec<(u64, bool)> = res
        .iter()
        .map(|y| (key(&b.mul(y).mul(y)), y.ord() == Some(0)))
        .collect();
    let m0 = (1u64 << r0) - 1;
    let m1 = if r1 == 0 { 0 } else { (1u64 << r1) - 1 };
    let mask = m0 | (m1 << 32);
    for &(xk, xu) in &ax {
        for &(yk, yu) in &by {
            let t = (xk + yk) & mask;
            if let Some(&unit_ok) = sq.get(&t) {
                if xu || yu || unit_ok {
                    return true;
                }
            }
        }
    }
    false
}

/// Random valid good BONGs with entries ±δπ^R by rejection: the R-walk is
/// biased towards the boundary jumps where the propositions change shape.
#[allow(dead_code)]
pub fn random_bongs(f: &'static Field, count: usize, seed: u64) -> Vec<Bong> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = f.e;
    let boundary = [-2 * e, 2 - 2 * e, -1, 0, 1, 2, 2 * e - 2, 2 * e - 1, 2 * e, 2 * e + 1];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let m = rng.gen_range(2..=7usize);
        let mut r = rng.gen_range(-2..=2i64);
        let mut entries: Vec<Elem> = Vec::with_capacity(m);
        for k in 0..m {
            if k > 0 {
                let jump = if rng.gen_bool(0.7) {
                    boundary[rng.gen_range(0..boundary.len())]
                } else {
                    rng.gen_range(-2 * e..=2 * e + 2)
                };
                r += jump;
            }
            let u = f.units[rng.gen_range(0..f.units.len())];
            let sign = if rng.gen_bool(0.5) { f.one() } else { f.int(-1) };
            entries.push(u.mul(&sign).mul(&f.pi.pow(r)));
        }
        if let Ok(b) = Bong::new(f, entries) {
            out.push(b);
        }
    }
    out
}
