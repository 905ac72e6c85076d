//! Exact field elements for dyadic local fields of degree ≤ 2 over ℚ₂.
//!
//! An element is stored as `(c0 + c1·g) / 2^den2` where `g` generates the
//! maximal order over ℤ₂ (absent for ℚ₂, θ=(1+√d)/2 for the unramified
//! quadratic, √d for the ramified ones) and the coefficients are exact modulo
//! 2^128 (wrapping `u128`, two's-complement). The spec-level view
//! "(valuation, unit digits)" is provided by [`Elem::ord`] and
//! [`Elem::unit_part`]; the valuation is computed through the field norm,
//! divided by the residue degree.
//!
//! Precision contract: every predicate in this crate depends only on square
//! classes, which are separated at π-adic precision 2e+1 ≤ 5. 128 bits of
//! 2-adic headroom with input valuations validated to |ord| ≤ 32 keeps all
//! in-scope computations exact far beyond that; values whose coefficients
//! vanish to 2-adic order ≥ 90 are canonicalized to zero, and equality snaps
//! at 2-adic order 44 so that printed elements (48 bits) round-trip.

use std::fmt;

/// 2-adic order below which a printed/reparsed difference counts as equal.
pub const EQ_BITS: u32 = 44;
/// 2-adic order at which a coefficient pair is canonicalized to zero.
pub const SNAP_BITS: u32 = 90;
/// Bits kept when printing coefficients (balanced lift).
pub const PRINT_BITS: u32 = 48;

/// Which dyadic field an element lives in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldKind {
    /// ℚ₂ itself.
    Q2,
    /// The unramified quadratic extension ℚ₂(√d), d ≡ 5 (mod 8) up to squares.
    Unramified { d: i64 },
    /// A ramified quadratic extension ℚ₂(√d).
    Ramified { d: i64 },
}

/// The arithmetic core of a field: generator relation and ramification data.
/// Small and `Copy` so every `Elem` can carry it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldCore {
    pub kind: FieldKind,
    /// Generator relation g² = rel_a + rel_b·g (0,0 for ℚ₂ where g is unused).
    pub rel_a: i64,
    pub rel_b: i64,
    /// Ramification index of 2: e = ord_π(2).
    pub e: i64,
    /// Residue degree f; the residue field has q = 2^f elements.
    pub f: i64,
}

impl FieldCore {
    pub fn q2() -> FieldCore {
        FieldCore { kind: FieldKind::Q2, rel_a: 0, rel_b: 0, e: 1, f: 1 }
    }

    /// Unramified quadratic: generator θ = (1+√d)/2, θ² = (d−1)/4 + θ.
    pub fn unramified(d: i64) -> FieldCore {
        assert!(d.rem_euclid(8) == 5, "unramified quadratic requires d ≡ 5 mod 8");
        FieldCore { kind: FieldKind::Unramified { d }, rel_a: (d - 1) / 4, rel_b: 1, e: 1, f: 2 }
    }

    /// Ramified quadratic: generator √d, d squarefree-normalized, d ≢ 1 mod 8.
    pub fn ramified(d: i64) -> FieldCore {
        FieldCore { kind: FieldKind::Ramified { d }, rel_a: d, rel_b: 0, e: 2, f: 1 }
    }

    pub fn is_quadratic(&self) -> bool {
        !matches!(self.kind, FieldKind::Q2)
    }

    /// The fixed uniformizer: 2 for ℚ₂ and the unramified quadratic; √d for
    /// ramified even d; 1+√d for ramified odd d.
    pub fn pi(&self) -> Elem {
        match self.kind {
            FieldKind::Q2 | FieldKind::Unramified { .. } => Elem::from_int(*self, 2),
            FieldKind::Ramified { d } => {
                if d % 2 == 0 {
                    Elem::generator(*self)
                } else {
                    Elem::from_int(*self, 1).add(&Elem::generator(*self))
                }
            }
        }
    }
}

/// An exact element of the field described by `core`.
#[derive(Clone, Copy)]
pub struct Elem {
    pub core: FieldCore,
    c0: u128,
    c1: u128,
    den2: u32,
}

fn v2(x: u128) -> u32 {
    if x == 0 {
        128
    } else {
        x.trailing_zeros()
    }
}

fn wrap_i64(x: i64) -> u128 {
    x as i128 as u128
}

/// Inverse of an odd residue modulo 2^128 (Newton iteration).
fn inv_odd(w: u128) -> u128 {
    debug_assert!(w & 1 == 1);
    let mut x = w; // correct mod 8
    for _ in 0..6 {
        x = x.wrapping_mul(2u128.wrapping_sub(w.wrapping_mul(x)));
    }
    debug_assert!(w.wrapping_mul(x) == 1);
    x
}

/// Balanced lift of `c` modulo 2^bits, as a signed integer.
fn balanced(c: u128, bits: u32) -> i128 {
    let m = (1u128 << bits) - 1;
    let v = c & m;
    if v >> (bits - 1) != 0 {
        v as i128 - (1i128 << bits)
    } else {
        v as i128
    }
}

impl Elem {
    pub fn zero(core: FieldCore) -> Elem {
        Elem { core, c0: 0, c1: 0, den2: 0 }
    }

    pub fn one(core: FieldCore) -> Elem {
        Elem::from_int(core, 1)
    }

    pub fn from_int(core: FieldCore, n: i64) -> Elem {
        Elem { core, c0: wrap_i64(n), c1: 0, den2: 0 }.normalized()
    }

    /// The ring generator g (θ or √d); panics for ℚ₂.
    pub fn generator(core: FieldCore) -> Elem {
        assert!(core.is_quadratic(), "Q2 has no quadratic generator");
        Elem { core, c0: 0, c1: 1, den2: 0 }
    }

    /// √d as an element, for the field's own defining d (up to the stored
    /// normalization): ramified g = √d directly; unramified √d = 2θ − 1.
    pub fn sqrt_gen(core: FieldCore) -> Elem {
        match core.kind {
            FieldKind::Q2 => panic!("Q2 has no adjoined square root"),
            FieldKind::Ramified { .. } => Elem::generator(core),
            FieldKind::Unramified { .. } => {
                // 2θ − 1
                Elem { core, c0: wrap_i64(-1), c1: 2, den2: 0 }
            }
        }
    }

    pub fn from_rational(core: FieldCore, num: i64, den: i64) -> Elem {
        assert!(den != 0, "zero denominator");
        let n = Elem::from_int(core, num);
        let d = Elem::from_int(core, den);
        n.mul(&d.inv())
    }

    fn normalized(mut self) -> Elem {
        let v0 = v2(self.c0);
        let v1 = v2(self.c1);
        if v0.min(v1) >= SNAP_BITS {
            return Elem::zero(self.core);
        }
        let t = self.den2.min(v0).min(v1);
        if t > 0 {
            self.c0 >>= t;
            self.c1 >>= t;
            self.den2 -= t;
        }
        assert!(self.den2 <= 96, "dyadic denominator exhausted the precision budget");
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    pub fn add(&self, rhs: &Elem) -> Elem {
        assert_eq!(self.core, rhs.core, "mixed-field arithmetic");
        let s = self.den2.max(rhs.den2);
        let (a0, a1) = (self.c0 << (s - self.den2), self.c1 << (s - self.den2));
        let (b0, b1) = (rhs.c0 << (s - rhs.den2), rhs.c1 << (s - rhs.den2));
        Elem {
            core: self.core,
            c0: a0.wrapping_add(b0),
            c1: a1.wrapping_add(b1),
            den2: s,
        }
        .normalized()
    }

    pub fn neg(&self) -> Elem {
        Elem { core: self.core, c0: self.c0.wrapping_neg(), c1: self.c1.wrapping_neg(), den2: self.den2 }
            .normalized()
    }

    pub fn sub(&self, rhs: &Elem) -> Elem {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Elem) -> Elem {
        assert_eq!(self.core, rhs.core, "mixed-field arithmetic");
        let a = wrap_i64(self.core.rel_a);
        let b = wrap_i64(self.core.rel_b);
        // (c0 + c1 g)(d0 + d1 g), g² = a + b g
        let cross = self.c1.wrapping_mul(rhs.c1);
        let c0 = self.c0.wrapping_mul(rhs.c0).wrapping_add(a.wrapping_mul(cross));
        let c1 = self
            .c0
            .wrapping_mul(rhs.c1)
            .wrapping_add(self.c1.wrapping_mul(rhs.c0))
            .wrapping_add(b.wrapping_mul(cross));
        Elem { core: self.core, c0, c1, den2: self.den2 + rhs.den2 }.normalized()
    }

    /// Galois conjugate: g ↦ rel_b − g (identity on ℚ₂).
    pub fn conj(&self) -> Elem {
        let b = wrap_i64(self.core.rel_b);
        Elem {
            core: self.core,
            c0: self.c0.wrapping_add(b.wrapping_mul(self.c1)),
            c1: self.c1.wrapping_neg(),
            den2: self.den2,
        }
        .normalized()
    }

    /// Numerator norm N(c0 + c1 g) = c0² + rel_b·c0·c1 − rel_a·c1², mod 2^128.
    fn numerator_norm(&self) -> u128 {
        let a = wrap_i64(self.core.rel_a);
        let b = wrap_i64(self.core.rel_b);
        self.c0
            .wrapping_mul(self.c0)
            .wrapping_add(b.wrapping_mul(self.c0).wrapping_mul(self.c1))
            .wrapping_sub(a.wrapping_mul(self.c1).wrapping_mul(self.c1))
    }

    /// π-adic valuation; `None` encodes ord(0) = +∞.
    pub fn ord(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        // The numerator-norm formula squares a ℚ₂ element, so its valuation
        // must be halved there; in the quadratic cases v₂(N) = f · ord_π.
        let (vn, div) = match self.core.kind {
            FieldKind::Q2 => (v2(self.c0), 1),
            _ => (v2(self.numerator_norm()), self.core.f),
        };
        assert!(
            vn < SNAP_BITS,
            "element too close to zero to resolve its valuation"
        );
        let vn = vn as i64;
        debug_assert!(vn % div == 0, "norm valuation not divisible by residue degree");
        Some(vn / div - self.core.e * self.den2 as i64)
    }

    pub fn inv(&self) -> Elem {
        assert!(!self.is_zero(), "division by zero");
        // x = n/2^s  ⇒  x⁻¹ = 2^s · n̄ / N(n), with N(n) = 2^v · w, w odd.
        let n = Elem { core: self.core, c0: self.c0, c1: self.c1, den2: 0 };
        let nb = n.conj();
        let norm = n.mul(&nb);
        debug_assert!(norm.c1 == 0 || v2(norm.c1) >= SNAP_BITS, "norm is not rational");
        let v = v2(norm.c0);
        assert!(v < SNAP_BITS, "division by a value too close to zero");
        let w = norm.c0 >> v;
        let wi = inv_odd(w);
        let mut out = Elem {
            core: self.core,
            c0: nb.c0.wrapping_mul(wi),
            c1: nb.c1.wrapping_mul(wi),
            den2: 0,
        };
        // remaining factor 2^{s}/2^{v}
        let s = self.den2;
        if v >= s {
            out.den2 = v - s;
        } else {
            out.c0 <<= s - v;
            out.c1 <<= s - v;
        }
        out.normalized()
    }

    pub fn div(&self, rhs: &Elem) -> Elem {
        self.mul(&rhs.inv())
    }

    pub fn pow(&self, k: i64) -> Elem {
        let base = if k < 0 { self.inv() } else { *self };
        let mut k = k.unsigned_abs();
        let mut acc = Elem::one(self.core);
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        acc
    }

    /// x · π^{−ord x}: the unit part. Panics on zero.
    pub fn unit_part(&self) -> Elem {
        let v = self.ord().expect("unit part of zero");
        self.mul(&self.core.pi().pow(-v))
    }

    /// π-adic order of the difference, as a lower-bound witness for equality
    /// testing; `None` means the difference is (snapped) zero.
    pub fn ord_diff(&self, rhs: &Elem) -> Option<i64> {
        self.sub(rhs).ord()
    }

    /// Raw coefficient access for enumeration code: (c0, c1, den2).
    pub fn raw(&self) -> (u128, u128, u32) {
        (self.c0, self.c1, self.den2)
    }

    /// Build from raw coefficients (numerator exact mod 2^128, over 2^den2).
    pub fn from_raw(core: FieldCore, c0: u128, c1: u128, den2: u32) -> Elem {
        Elem { core, c0, c1, den2 }.normalized()
    }
}

impl PartialEq for Elem {
    /// Equality up to the documented snap threshold: the difference must
    /// vanish to 2-adic coefficient order ≥ EQ_BITS (after denominator
    /// alignment). Exact computations compare exactly; printed elements
    /// (48-bit lifts) still compare equal after reparsing.
    fn eq(&self, other: &Elem) -> bool {
        if self.core != other.core {
            return false;
        }
        let s = self.den2.max(other.den2);
        let a0 = (self.c0 << (s - self.den2)).wrapping_sub(other.c0 << (s - other.den2));
        let a1 = (self.c1 << (s - self.den2)).wrapping_sub(other.c1 << (s - other.den2));
        v2(a0) >= EQ_BITS && v2(a1) >= EQ_BITS
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Express as (x + y·sqrt(d))/(2^s·qd) with balanced 48-bit lifts,
        // searching small odd denominators qd so that e.g. −1/5 prints as a
        // fraction rather than as its 2-adic lift.
        let extract = |c0: u128, c1: u128| -> (i128, i128, u32, i64) {
            let (mut x, mut y, mut s, d) = match self.core.kind {
                FieldKind::Q2 => (balanced(c0, PRINT_BITS), 0i128, self.den2, 0i64),
                FieldKind::Ramified { d } => {
                    (balanced(c0, PRINT_BITS), balanced(c1, PRINT_BITS), self.den2, d)
                }
                FieldKind::Unramified { d } => {
                    // c0 + c1θ = (2c0 + c1 + c1√d)/2
                    let x = balanced((c0 << 1).wrapping_add(c1), PRINT_BITS);
                    (x, balanced(c1, PRINT_BITS), self.den2 + 1, d)
                }
            };
            // Cancel common factors of 2 against the denominator.
            while s > 0 && x % 2 == 0 && y % 2 == 0 && (x != 0 || y != 0) {
                x /= 2;
                y /= 2;
                s -= 1;
            }
            (x, y, s, d)
        };
        const SMALL: i128 = 1 << 20;
        let mut found = None;
        for qd in (1..=199u128).step_by(2) {
            let (x, y, s, d) = extract(self.c0.wrapping_mul(qd), self.c1.wrapping_mul(qd));
            if x.abs() <= SMALL && y.abs() <= SMALL {
                found = Some((x, y, s, d, qd as i128));
                break;
            }
        }
        let (x, y, s, d, qd) = found.unwrap_or_else(|| {
            let (x, y, s, d) = extract(self.c0, self.c1);
            (x, y, s, d, 1)
        });
        let mut num = String::new();
        if y == 0 {
            num.push_str(&x.to_string());
        } else {
            if x != 0 {
                num.push_str(&x.to_string());
                num.push_str(if y > 0 { "+" } else { "-" });
            } else if y < 0 {
                num.push('-');
            }
            let ya = y.abs();
            if ya != 1 {
                num.push_str(&format!("{}*", ya));
            }
            num.push_str(&format!("sqrt({})", d));
        }
        // Reduce a pure power-of-two numerator against the denominator for
        // readability (e.g. prints "2" rather than "8/4").
        if s == 0 && qd == 1 {
            write!(f, "{}", num)
        } else if qd == 1 && y == 0 && x != 0 && x.trailing_zeros() >= s {
            write!(f, "{}", x >> s)
        } else if x != 0 || y != 0 {
            let den = (1i128 << s) * qd;
            if y != 0 && x != 0 {
                write!(f, "({})/{}", num, den)
            } else {
                write!(f, "{}/{}", num, den)
            }
        } else {
            write!(f, "0")
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q2_basics() {
        let k = FieldCore::q2();
        let eight = Elem::from_int(k, 8);
        assert_eq!(eight.ord(), Some(3));
        assert_eq!(Elem::zero(k).ord(), None);
        let three = Elem::from_int(k, 3);
        assert_eq!(three.mul(&three.inv()), Elem::one(k));
        assert_eq!(three.add(&three.neg()), Elem::zero(k));
        let pi = k.pi();
        assert_eq!(pi.mul(&pi.inv()), Elem::one(k));
        assert_eq!(Elem::from_rational(k, -1, 2).ord(), Some(-1));
    }

    #[test]
    fn ramified_sqrt2() {
        let k = FieldCore::ramified(2);
        let pi = k.pi(); // √2
        assert_eq!(pi.ord(), Some(1));
        assert_eq!(Elem::from_int(k, 2).ord(), Some(2));
        // ord(2+√2) = 1 (norm (2+√2)(2−√2) = 2)
        let x = Elem::from_int(k, 2).add(&Elem::sqrt_gen(k));
        assert_eq!(x.ord(), Some(1));
        assert_eq!(x.mul(&x.conj()), Elem::from_int(k, 2));
        let u = x.unit_part();
        assert_eq!(u.ord(), Some(0));
    }

    #[test]
    fn ramified_sqrt3_uniformizer() {
        let k = FieldCore::ramified(3);
        let pi = k.pi(); // 1+√3
        assert_eq!(pi.ord(), Some(1));
        assert_eq!(Elem::from_int(k, 2).ord(), Some(2));
    }

    #[test]
    fn unramified_sqrt5() {
        let k = FieldCore::unramified(5);
        assert_eq!(Elem::from_int(k, 2).ord(), Some(1));
        let theta = Elem::generator(k);
        assert_eq!(theta.ord(), Some(0));
        // θ² = θ + 1
        assert_eq!(theta.mul(&theta), theta.add(&Elem::one(k)));
        // (5+√5)/2 = 2+θ has ord 0 (its norm is (25−5)/4 = 5)
        let x = Elem::from_int(k, 2).add(&theta);
        assert_eq!(x.ord(), Some(0));
        let s5 = Elem::sqrt_gen(k);
        assert_eq!(s5.mul(&s5), Elem::from_int(k, 5));
    }

    #[test]
    fn display_roundtrip_shapes() {
        let k = FieldCore::ramified(2);
        let x = Elem::from_int(k, 2).add(&Elem::sqrt_gen(k));
        assert_eq!(format!("{}", x), "2+sqrt(2)");
        assert_eq!(format!("{}", Elem::from_int(k, -1)), "-1");
        assert_eq!(format!("{}", Elem::from_rational(FieldCore::q2(), 1, 4)), "1/4");
        assert_eq!(format!("{}", Elem::from_int(FieldCore::q2(), 8)), "8");
        assert_eq!(format!("{}", Elem::from_rational(FieldCore::q2(), -1, 5)), "-1/5");
        assert_eq!(format!("{}", Elem::from_rational(FieldCore::q2(), 3, 20)), "3/20");
    }
}
