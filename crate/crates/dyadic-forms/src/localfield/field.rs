//! Field descriptors: square-class tables, quadratic defect, Hilbert symbols.
//!
//! A [`Field`] fixes once and for all the uniformizer π, the unit ρ with
//! d(1−4ρ) = 2e, Δ = 1−4ρ, and the representative system 𝒰 of unit square
//! classes normalized so that d(δ) = ord(δ−1) for every δ ∈ 𝒰. The Hilbert
//! symbol is decided by a bounded congruence search for isotropy of
//! z² = ax² + by² (sound by a Hensel-lifting bound at π-adic precision 2e+3)
//! and tabulated over all square-class pairs at construction time.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::elem::{Elem, FieldCore, FieldKind};
use crate::ext::{Ext, Fin, Inf};

#[derive(Debug, thiserror::Error)]
pub enum FieldError {
    #[error("unsupported field: {0}")]
    Unsupported(String),
    #[error("precision {0} too small; need at least {1}")]
    Precision(i64, i64),
}

/// Immutable description of a dyadic local field of degree ≤ 2 over ℚ₂.
pub struct Field {
    pub core: FieldCore,
    /// Canonical name, e.g. `q2`, `q2(sqrt(-2))`.
    pub name: String,
    /// Ramification index of 2.
    pub e: i64,
    /// Residue field size Nπ.
    pub q: u64,
    /// Working precision in π-adic digits (informational; arithmetic carries
    /// 128 bits of 2-adic headroom regardless).
    pub prec: i64,
    pub pi: Elem,
    pub rho: Elem,
    pub delta: Elem,
    /// 𝒰: unit square-class representatives with d(δ) = ord(δ−1).
    pub units: Vec<Elem>,
    /// d(δ) for each δ ∈ 𝒰 (class invariant).
    pub unit_defects: Vec<Ext>,
    /// Indices into `units` of 𝒰₁ = {δ : d(δ) = 1}.
    pub u1: Vec<usize>,
    /// Indices of 𝒰± = {ε : (1+π, ε)_𝔭 = ±1}.
    pub uplus: Vec<usize>,
    pub uminus: Vec<usize>,
    /// Hilbert symbols over square-class pairs; index 2·unit_idx + t.
    hilbert_table: Vec<i8>,
}

/// Canonical coset representatives of 𝒪/π^k, as exact integral elements.
/// Basis (1, π) in the ramified cases, (1, θ) unramified, (1) for ℚ₂.
pub fn residues(core: FieldCore, k: u32) -> Vec<Elem> {
    let (r0, r1) = residue_dims(core, k);
    let pi_or_gen = match core.kind {
        FieldKind::Q2 => None,
        FieldKind::Unramified { .. } => Some(Elem::generator(core)),
        FieldKind::Ramified { .. } => Some(core.pi()),
    };
    let mut out = Vec::with_capacity(1usize << (r0 + r1));
    for c1 in 0..(1u64 << r1) {
        for c0 in 0..(1u64 << r0) {
            let mut x = Elem::from_int(core, c0 as i64);
            if let Some(g) = pi_or_gen {
                x = x.add(&Elem::from_int(core, c1 as i64).mul(&g));
            }
            out.push(x);
        }
    }
    out
}

/// Bit widths (r0, r1) of the coefficient ranges describing 𝒪/π^k.
fn residue_dims(core: FieldCore, k: u32) -> (u32, u32) {
    match core.kind {
        FieldKind::Q2 => (k, 0),
        FieldKind::Unramified { .. } => (k, k),
        FieldKind::Ramified { .. } => (k.div_ceil(2), k / 2),
    }
}

/// Packed canonical key of an integral element modulo π^k: low 32 bits hold
/// the (1)-coordinate, high 32 bits the (π or θ)-coordinate, each reduced to
/// its residue width. Keys of x and y add componentwise to the key of x+y
/// (after re-masking), which the isotropy search exploits.
pub fn residue_key(core: FieldCore, k: u32, x: &Elem) -> u64 {
    let (c0, c1, den2) = x.raw();
    assert!(den2 == 0, "residue_key of a non-integral element");
    let (r0, r1) = residue_dims(core, k);
    let (a0, a1) = match core.kind {
        FieldKind::Q2 => (c0, 0),
        FieldKind::Unramified { .. } => (c0, c1),
        FieldKind::Ramified { d } => {
            if d % 2 == 0 {
                (c0, c1)
            } else {
                // g = π − 1: c0 + c1 g = (c0 − c1) + c1 π
                (c0.wrapping_sub(c1), c1)
            }
        }
    };
    let m0 = (1u64 << r0) - 1;
    let m1 = if r1 == 0 { 0 } else { (1u64 << r1) - 1 };
    (a0 as u64 & m0) | ((a1 as u64 & m1) << 32)
}

fn key_mask(core: FieldCore, k: u32) -> u64 {
    let (r0, r1) = residue_dims(core, k);
    let m0 = (1u64 << r0) - 1;
    let m1 = if r1 == 0 { 0 } else { (1u64 << r1) - 1 };
    m0 | (m1 << 32)
}

fn key_to_index(core: FieldCore, k: u32, key: u64) -> usize {
    let (r0, _r1) = residue_dims(core, k);
    ((key & 0xffff_ffff) | ((key >> 32) << r0)) as usize
}

impl Field {
    pub fn q2() -> Field {
        Field::new(FieldKind::Q2, None).expect("Q2 always constructs")
    }

    /// ℚ₂(√d) for a nonzero integer d; the square part of d is stripped and
    /// the residual square class decides the extension (error if trivial).
    pub fn quadratic(d: i64) -> Result<Field, FieldError> {
        let d = squarefree_part(d)
            .ok_or_else(|| FieldError::Unsupported(format!("sqrt({d}) is rational")))?;
        let kind = classify_quadratic(d)?;
        Field::new(kind, None)
    }

    pub fn new(kind: FieldKind, prec: Option<i64>) -> Result<Field, FieldError> {
        let core = match kind {
            FieldKind::Q2 => FieldCore::q2(),
            FieldKind::Unramified { d } => {
                if d.rem_euclid(8) != 5 {
                    return Err(FieldError::Unsupported(format!(
                        "d = {d} is not unramified (need d ≡ 5 mod 8)"
                    )));
                }
                FieldCore::unramified(d)
            }
            FieldKind::Ramified { d } => {
                let dd = squarefree_part(d)
                    .ok_or_else(|| FieldError::Unsupported(format!("sqrt({d}) is rational")))?;
                match classify_quadratic(dd)? {
                    k @ FieldKind::Ramified { .. } => match k {
                        FieldKind::Ramified { d } => FieldCore::ramified(d),
                        _ => unreachable!(),
                    },
                    _ => {
                        return Err(FieldError::Unsupported(format!(
                            "d = {d} does not give a ramified extension"
                        )))
                    }
                }
            }
        };
        let e = core.e;
        let min_prec = 3 * e + 4;
        let prec = prec.unwrap_or(3 * e + 6);
        if prec < min_prec {
            return Err(FieldError::Precision(prec, min_prec));
        }
        let pi = core.pi();
        let q = 1u64 << core.f;

        // --- 𝒰: enumerate units mod π^{2e+1}, bucket into square classes. ---
        let k_sep = (2 * e + 1) as u32;
        let unit_residues: Vec<Elem> = residues(core, k_sep)
            .into_iter()
            .filter(|x| x.ord() == Some(0))
            .collect();
        let mut buckets: Vec<Vec<Elem>> = Vec::new();
        for u in &unit_residues {
            let mut placed = false;
            for b in buckets.iter_mut() {
                if is_square_impl(core, &b[0].mul(u)) {
                    b.push(*u);
                    placed = true;
                    break;
                }
            }
            if !placed {
                buckets.push(vec![*u]);
            }
        }
        let expected_classes = if core.is_quadratic() { 8 } else { 4 };
        assert_eq!(
            buckets.len(),
            expected_classes,
            "unit square-class count mismatch"
        );
        // Representative per class: first member (enumeration order) with
        // ord(δ−1) = d(δ); the squares class is represented by 1 exactly.
        let one = Elem::one(core);
        let mut units = Vec::new();
        let mut unit_defects = Vec::new();
        for b in &buckets {
            let class_defect = defect_of_unit(core, &b[0]);
            let rep = if class_defect == Inf {
                one
            } else {
                *b.iter()
                    .find(|u| {
                        u.sub(&one)
                            .ord()
                            .map(Ext::int)
                            .unwrap_or(Inf)
                            == class_defect
                    })
                    .expect("every unit class has a normalized representative")
            };
            units.push(rep);
            unit_defects.push(class_defect);
        }

        // --- ρ: first enumerated unit r with d(1−4r) = 2e; Δ = 1−4ρ. ---
        let four = Elem::from_int(core, 4);
        let rho = *unit_residues
            .iter()
            .find(|r| {
                let cand = one.sub(&four.mul(r));
                defect_of_unit(core, &cand) == Ext::int(2 * e)
            })
            .expect("a unit of maximal defect 2e exists");
        let delta = one.sub(&four.mul(&rho));

        // --- Hilbert table over all square-class pairs. ---
        let classes: Vec<Elem> = units
            .iter()
            .flat_map(|u| [*u, u.mul(&pi)])
            .collect();
        let hilbert_table = build_hilbert_table(core, e, &classes);

        let find_class = |x: &Elem| -> usize {
            let u = x.unit_part();
            let t = x.ord().unwrap().rem_euclid(2) as usize;
            for (i, d) in units.iter().enumerate() {
                if is_square_impl(core, &u.mul(d)) {
                    return 2 * i + t;
                }
            }
            unreachable!("unit square classes cover all units")
        };

        // --- 𝒰₁ and 𝒰± ---
        let u1: Vec<usize> = (0..units.len())
            .filter(|&i| unit_defects[i] == Ext::int(1))
            .collect();
        let omega = one.add(&pi);
        let omega_class = find_class(&omega);
        let mut uplus = Vec::new();
        let mut uminus = Vec::new();
        for i in 0..units.len() {
            let s = hilbert_table[omega_class * classes.len() + 2 * i];
            if s == 1 {
                uplus.push(i);
            } else {
                uminus.push(i);
            }
        }

        let name = match core.kind {
            FieldKind::Q2 => "q2".to_string(),
            FieldKind::Unramified { d } | FieldKind::Ramified { d } => {
                format!("q2(sqrt({d}))")
            }
        };
        Ok(Field {
            core,
            name,
            e,
            q,
            prec,
            pi,
            rho,
            delta,
            units,
            unit_defects,
            u1,
            uplus,
            uminus,
            hilbert_table,
        })
    }

    /// Process-wide shared instance by field name (`q2`, `q2(sqrt(2))`, ...).
    /// Panics on unparseable names; intended for tests and internal reuse.
    pub fn shared(name: &str) -> &'static Field {
        let kind = super::parse::field_kind_of_name(name)
            .unwrap_or_else(|e| panic!("Field::shared({name}): {e}"));
        Field::cached(kind)
    }

    /// Process-wide shared instance per field kind (fields are immutable).
    pub fn cached(kind: FieldKind) -> &'static Field {
        static CACHE: OnceLock<Mutex<HashMap<FieldKind, &'static Field>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap();
        map.entry(kind).or_insert_with(|| {
            Box::leak(Box::new(Field::new(kind, None).expect("cached field kinds are valid")))
        })
    }

    pub fn zero(&self) -> Elem {
        Elem::zero(self.core)
    }

    pub fn one(&self) -> Elem {
        Elem::one(self.core)
    }

    pub fn int(&self, n: i64) -> Elem {
        Elem::from_int(self.core, n)
    }

    /// d(c): the relative quadratic defect order. 0 for odd-order c; for even
    /// order, the defect of the unit part (square-class invariance); +∞ for
    /// squares.
    pub fn quadratic_defect(&self, c: &Elem) -> Ext {
        let v = c.ord().expect("quadratic defect of zero");
        if v.rem_euclid(2) == 1 {
            Ext::int(0)
        } else {
            defect_of_unit(self.core, &c.unit_part())
        }
    }

    pub fn is_square(&self, c: &Elem) -> bool {
        match c.ord() {
            None => false,
            Some(v) => v.rem_euclid(2) == 0 && is_square_impl(self.core, &c.unit_part()),
        }
    }

    /// The square class of c as (index into 𝒰, parity of ord c).
    pub fn square_class(&self, c: &Elem) -> (usize, u8) {
        let u = c.unit_part();
        let t = c.ord().unwrap().rem_euclid(2) as u8;
        for (i, d) in self.units.iter().enumerate() {
            if is_square_impl(self.core, &u.mul(d)) {
                return (i, t);
            }
        }
        unreachable!("unit square classes cover all units")
    }

    /// The canonical representative δ·π^t of the square class of c.
    pub fn square_class_rep(&self, c: &Elem) -> (Elem, u8) {
        let (i, t) = self.square_class(c);
        (self.units[i], t)
    }

    /// Hilbert symbol (a, b)_𝔭 ∈ {−1, +1}.
    pub fn hilbert(&self, a: &Elem, b: &Elem) -> i8 {
        let (ia, ta) = self.square_class(a);
        let (ib, tb) = self.square_class(b);
        let n = 2 * self.units.len();
        self.hilbert_table[(2 * ia + ta as usize) * n + (2 * ib + tb as usize)]
    }

    /// c^#: Δ if ord c is odd; otherwise 1 + 4ρ·r⁻¹·π^{−d(c)} where the class
    /// representative satisfies δ = x²(1 + r·π^{d(c)}).
    /// Errors when c ∈ F^{×2} ∪ ΔF^{×2} (where # is undefined).
    pub fn sharp(&self, c: &Elem) -> Result<Elem, FieldError> {
        let v = c.ord().expect("sharp of zero");
        if v.rem_euclid(2) == 1 {
            return Ok(self.delta);
        }
        let (i, _) = self.square_class(c);
        let d = self.unit_defects[i];
        if d == Inf || d == Ext::int(2 * self.e) {
            return Err(FieldError::Unsupported(
                "sharp undefined on F^2 ∪ ΔF^2".to_string(),
            ));
        }
        let delta_rep = self.units[i];
        let dv = d.as_int();
        // Find x with ord(δ − x²) = d (the defect maximizer).
        let k = (2 * self.e + 2) as u32;
        let x = residues(self.core, k)
            .into_iter()
            .filter(|x| x.ord() == Some(0))
            .find(|x| delta_rep.sub(&x.mul(x)).ord() == Some(dv))
            .expect("defect maximizer exists among unit residues");
        let r = delta_rep
            .div(&x.mul(&x))
            .sub(&self.one())
            .mul(&self.pi.pow(-dv));
        debug_assert_eq!(r.ord(), Some(0));
        let four_rho = Elem::from_int(self.core, 4).mul(&self.rho);
        Ok(self
            .one()
            .add(&four_rho.mul(&r.inv()).mul(&self.pi.pow(-dv))))
    }

    /// min(d_a, d_b): the domination-principle lower bound for d(ab).
    pub fn domination_min(&self, d_a: Ext, d_b: Ext) -> Ext {
        d_a.min(d_b)
    }

    /// All square-class representatives δπ^t, δ ∈ 𝒰, t ∈ {0,1}.
    pub fn square_classes(&self) -> Vec<Elem> {
        self.units
            .iter()
            .flat_map(|u| [*u, u.mul(&self.pi)])
            .collect()
    }
}

/// Defect of a unit by bounded maximization of ord(u − x²) over residues,
/// capped at 2e+1 (the local square theorem: beyond that, u is a square).
fn defect_of_unit(core: FieldCore, u: &Elem) -> Ext {
    debug_assert_eq!(u.ord(), Some(0));
    let e = core.e;
    let cap = 2 * e + 1;
    let k = (2 * e + 2) as u32;
    let mut best: i64 = 0;
    for x in residues(core, k) {
        if x.ord() != Some(0) {
            continue;
        }
        let o = u.sub(&x.mul(&x)).ord().map(|v| v.min(cap)).unwrap_or(cap);
        if o > best {
            best = o;
            if best >= cap {
                return Inf;
            }
        }
    }
    Fin(2 * best)
}

fn is_square_impl(core: FieldCore, u: &Elem) -> bool {
    defect_of_unit(core, u) == Inf
}

/// Hilbert symbols for every ordered pair of class representatives, decided
/// by searching primitive solutions of z² = ax² + by² modulo π^{2e+3}.
fn build_hilbert_table(core: FieldCore, e: i64, classes: &[Elem]) -> Vec<i8> {
    let k = (2 * e + 3) as u32;
    let res = residues(core, k);
    let mask = key_mask(core, k);
    let idx_bits_size = {
        let (r0, r1) = residue_dims(core, k);
        1usize << (r0 + r1)
    };
    // Square tables: keys of z² for all z, and for unit z only.
    let mut sq_all = vec![false; idx_bits_size];
    let mut sq_unit = vec![false; idx_bits_size];
    for z in &res {
        let key = residue_key(core, k, &z.mul(z));
        let idx = key_to_index(core, k, key);
        sq_all[idx] = true;
        if z.ord() == Some(0) {
            sq_unit[idx] = true;
        }
    }
    let unit_flags: Vec<bool> = res.iter().map(|x| x.ord() == Some(0)).collect();
    let n = classes.len();
    let mut table = vec![0i8; n * n];
    for (ia, a) in classes.iter().enumerate() {
        // keys of a·x² per residue x
        let ax: Vec<u64> = res
            .iter()
            .map(|x| residue_key(core, k, &a.mul(x).mul(x)))
            .collect();
        for (ib, b) in classes.iter().enumerate() {
            if ib < ia {
                table[ia * n + ib] = table[ib * n + ia]; // symmetry
                continue;
            }
            let by: Vec<u64> = res
                .iter()
                .map(|y| residue_key(core, k, &b.mul(y).mul(y)))
                .collect();
            let mut isotropic = false;
            'outer: for (xi, xk) in ax.iter().enumerate() {
                let x_unit = unit_flags[xi];
                for (yi, yk) in by.iter().enumerate() {
                    let t = (xk + yk) & mask;
                    let idx = key_to_index(core, k, t);
                    let hit = if x_unit || unit_flags[yi] {
                        sq_all[idx]
                    } else {
                        sq_unit[idx]
                    };
                    if hit {
                        isotropic = true;
                        break 'outer;
                    }
                }
            }
            table[ia * n + ib] = if isotropic { 1 } else { -1 };
        }
    }
    table
}

/// The squarefree part of n (sign preserved); `None` if n is a perfect square
/// (including n = 0 i.e. no quadratic extension).
pub(crate) fn squarefree_part(n: i64) -> Option<i64> {
    if n == 0 {
        return None;
    }
    let mut m = n.unsigned_abs();
    let mut out: i64 = if n < 0 { -1 } else { 1 };
    let mut p: u64 = 2;
    while p * p <= m {
        let mut cnt = 0;
        while m % p == 0 {
            m /= p;
            cnt += 1;
        }
        if cnt % 2 == 1 {
            out = out.checked_mul(p as i64)?;
        }
        p += 1;
    }
    out = out.checked_mul(m as i64)?;
    if out == 1 {
        None
    } else {
        Some(out)
    }
}

/// Which quadratic extension ℚ₂(√d) a squarefree d defines.
pub(crate) fn classify_quadratic(d: i64) -> Result<FieldKind, FieldError> {
    match d.rem_euclid(8) {
        1 => Err(FieldError::Unsupported(format!(
            "sqrt({d}) already lies in Q2 (d ≡ 1 mod 8)"
        ))),
        5 => Ok(FieldKind::Unramified { d }),
        _ => Ok(FieldKind::Ramified { d }),
    }
}
