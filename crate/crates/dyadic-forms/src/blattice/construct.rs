//! Standard lattice constructors: the scaled hyperbolic planes 𝐇_ℓ and the
//! test-set building bricks C₁..C₄^{E,n}(δ,T), C₁..C₄^{O,n}(ε) and the
//! swapped-branch variant C̄₄^{O,n}(ε).

use super::{Bong, BongError};
use crate::ext::Ext;
use crate::localfield::{Elem, Field};

/// 𝐇_ℓ^{copies} = (≺π^ℓ, −π^{−ℓ}≻)^{⊥ copies}, 0 ≤ ℓ ≤ e.
pub fn hyperbolic(f: &'static Field, l: i64, copies: usize) -> Result<Bong, BongError> {
    if !(0..=f.e).contains(&l) {
        return Err(BongError::Parameter(format!("H_l needs 0 <= l <= e, got l = {l}")));
    }
    let mut entries = Vec::with_capacity(2 * copies);
    for _ in 0..copies {
        entries.push(f.pi.pow(l));
        entries.push(f.pi.pow(-l).neg());
    }
    Bong::new(f, entries)
}

fn even_n(n: usize) -> Result<usize, BongError> {
    if n < 2 || n % 2 != 0 {
        return Err(BongError::Parameter(format!("need even n >= 2, got {n}")));
    }
    Ok((n - 2) / 2)
}

fn odd_n(n: usize) -> Result<usize, BongError> {
    if n < 3 || n % 2 != 1 {
        return Err(BongError::Parameter(format!("need odd n >= 3, got {n}")));
    }
    Ok((n - 3) / 2)
}

/// Require (δ, T) admissible for C₃/C₄: T ∈ {0,1} and T + d(δπ^T) = 1.
fn check_pc(f: &Field, delta: &Elem, t: i64) -> Result<(), BongError> {
    let ok = (t == 0 || t == 1)
        && delta.ord() == Some(0)
        && Ext::int(t) + f.quadratic_defect(&delta.mul(&f.pi.pow(t))) == Ext::int(1);
    if ok {
        Ok(())
    } else {
        Err(BongError::Parameter(format!(
            "(delta, T) = ({delta}, {t}) is not in P_c (need T in {{0,1}}, T + d(delta pi^T) = 1)"
        )))
    }
}

/// C₁^{E,n} = 𝐇_e^{(n−2)/2} ⊥ ≺π^e, −π^{−e}≻ = 𝐇_e^{n/2}.
pub fn c1_even(f: &'static Field, n: usize) -> Result<Bong, BongError> {
    let half = even_n(n)?;
    hyperbolic(f, f.e, half + 1)
}

/// C₂^{E,n} = 𝐇₁^{(n−2)/2} ⊥ ≺π, −Δπ^{−1}≻, defined only when e = 1.
pub fn c2_even(f: &'static Field, n: usize) -> Result<Bong, BongError> {
    let half = even_n(n)?;
    if f.e != 1 {
        return Err(BongError::Parameter(format!("C2^E requires e = 1, field has e = {}", f.e)));
    }
    let mut entries = hyperbolic(f, 1, half)?.entries;
    entries.push(f.pi);
    entries.push(f.delta.mul(&f.pi.inv()).neg());
    Bong::new(f, entries)
}

/// C₃^{E,n}(δ,T) = 𝐇₀^{(n−2)/2} ⊥ ≺1, −δπ^T≻ for (δ,T) ∈ 𝒫_c.
pub fn c3_even(f: &'static Field, n: usize, delta: &Elem, t: i64) -> Result<Bong, BongError> {
    let half = even_n(n)?;
    check_pc(f, delta, t)?;
    let mut entries = hyperbolic(f, 0, half)?.entries;
    entries.push(f.one());
    entries.push(delta.mul(&f.pi.pow(t)).neg());
    Bong::new(f, entries)
}

/// C₄^{E,n}(δ,T) = 𝐇₀^{(n−2)/2} ⊥ ≺(δπ^T)^#, −(δπ^T)^# δπ^T≻ for (δ,T) ∈ 𝒫_c.
pub fn c4_even(f: &'static Field, n: usize, delta: &Elem, t: i64) -> Result<Bong, BongError> {
    let half = even_n(n)?;
    check_pc(f, delta, t)?;
    let c = delta.mul(&f.pi.pow(t));
    let sharp = f
        .sharp(&c)
        .map_err(|e| BongError::Parameter(format!("sharp undefined for ({delta}, {t}): {e}")))?;
    let mut entries = hyperbolic(f, 0, half)?.entries;
    entries.push(sharp);
    entries.push(sharp.mul(&c).neg());
    Bong::new(f, entries)
}

fn check_unit(eps: &Elem) -> Result<(), BongError> {
    if eps.ord() == Some(0) {
        Ok(())
    } else {
        Err(BongError::Parameter(format!("epsilon = {eps} must be a unit")))
    }
}

/// C₁^{O,n}(ε) = 𝐇₀^{(n−3)/2} ⊥ ≺1, −1≻ ⊥ ≺−επ≻.
pub fn c1_odd(f: &'static Field, n: usize, eps: &Elem) -> Result<Bong, BongError> {
    let half = odd_n(n)?;
    check_unit(eps)?;
    let mut entries = hyperbolic(f, 0, half + 1)?.entries;
    entries.push(eps.mul(&f.pi).neg());
    Bong::new(f, entries)
}

/// C₂^{O,n}(ε) = 𝐇₀^{(n−3)/2} ⊥ ≺1, −1≻ ⊥ ≺−ε≻.
pub fn c2_odd(f: &'static Field, n: usize, eps: &Elem) -> Result<Bong, BongError> {
    let half = odd_n(n)?;
    check_unit(eps)?;
    let mut entries = hyperbolic(f, 0, half + 1)?.entries;
    entries.push(eps.neg());
    Bong::new(f, entries)
}

/// C₃^{O,n}(ε) = 𝐇₀^{(n−3)/2} ⊥ ≺1, −Δ≻ ⊥ ≺−εΔπ≻.
pub fn c3_odd(f: &'static Field, n: usize, eps: &Elem) -> Result<Bong, BongError> {
    let half = odd_n(n)?;
    check_unit(eps)?;
    let mut entries = hyperbolic(f, 0, half)?.entries;
    entries.push(f.one());
    entries.push(f.delta.neg());
    entries.push(eps.mul(&f.delta).mul(&f.pi).neg());
    Bong::new(f, entries)
}

fn c4_odd_impl(f: &'static Field, n: usize, eps: &Elem, swap: bool) -> Result<Bong, BongError> {
    let half = odd_n(n)?;
    check_unit(eps)?;
    let omega = f.one().add(&f.pi);
    let sym = f.hilbert(&omega, &eps.neg());
    // (ω, −ε) = −1 selects ≺1, −ω≻; +1 selects ≺ω^#, −ω^#ω≻. The barred
    // variant C̄₄ swaps the two branches.
    let plain_branch = (sym == -1) != swap;
    let mut entries = hyperbolic(f, 0, half)?.entries;
    if plain_branch {
        entries.push(f.one());
        entries.push(omega.neg());
    } else {
        // ω^# = 1 + 4ρπ⁻¹ is an admissible choice of sharp for ω.
        let omega_sharp = f.one().add(&f.int(4).mul(&f.rho).mul(&f.pi.inv()));
        debug_assert!(f.is_square(&omega_sharp.mul(&f.sharp(&omega).unwrap())));
        entries.push(omega_sharp);
        entries.push(omega_sharp.mul(&omega).neg());
    }
    entries.push(omega.mul(eps).neg());
    Bong::new(f, entries)
}

/// C₄^{O,n}(ε): 𝐇₀^{(n−3)/2} ⊥ ≺1, −ω≻ ⊥ ≺−ωε≻ if (ω,−ε)_𝔭 = −1, and
/// 𝐇₀^{(n−3)/2} ⊥ ≺ω^#, −ω^#ω≻ ⊥ ≺−ωε≻ if (ω,−ε)_𝔭 = 1, with ω = 1+π.
pub fn c4_odd(f: &'static Field, n: usize, eps: &Elem) -> Result<Bong, BongError> {
    c4_odd_impl(f, n, eps, false)
}

/// C̄₄^{O,n}(ε): as C₄^{O,n}(ε) with the two branches swapped.
pub fn c4bar_odd(f: &'static Field, n: usize, eps: &Elem) -> Result<Bong, BongError> {
    c4_odd_impl(f, n, eps, true)
}

/// 𝒫_c = {(δ,1) : δ ∈ 𝒰} ∪ {(δ,0) : δ ∈ 𝒰₁} as (δ, T) pairs.
pub fn pc_set(f: &Field) -> Vec<(Elem, i64)> {
    let mut out: Vec<(Elem, i64)> = f.units.iter().map(|d| (*d, 1)).collect();
    out.extend(f.u1.iter().map(|&i| (f.units[i], 0)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::Field;

    #[test]
    fn pc_set_q2() {
        let f = Field::shared("q2");
        let got: Vec<(i64, i64)> = pc_set(f)
            .iter()
            .map(|(d, t)| {
                let (c0, _, den2) = d.raw();
                assert_eq!(den2, 0);
                ((c0 as u64 & 7) as i64, *t)
            })
            .collect();
        assert_eq!(got, vec![(1, 1), (3, 1), (5, 1), (7, 1), (3, 0), (7, 0)]);
    }

    #[test]
    fn explicit_small_constructors() {
        let f = Field::shared("q2");
        let c2o = c2_odd(f, 3, &f.int(5)).unwrap();
        assert_eq!(c2o.to_string(), "[1, -1, -5]");
        let c3e = c3_even(f, 2, &f.int(3), 0).unwrap();
        assert_eq!(c3e.to_string(), "[1, -3]");
        let c4e = c4_even(f, 2, &f.int(3), 0).unwrap();
        // entries are (3^#, −3^#·3); the defining property is (3, 3^#) = −1
        assert_eq!(f.hilbert(&f.int(3), &c4e.a(1)), -1);
        assert!(f.is_square(&c4e.a(2).neg().mul(&c4e.a(1).inv()).mul(&f.int(3).inv())));
        // (1,0) is rejected: d(1) = ∞
        assert!(c3_even(f, 2, &f.one(), 0).is_err());
        // C2^E only for e = 1
        assert!(c2_even(Field::shared("q2(sqrt(2))"), 2).is_err());
        assert!(c2_even(f, 2).is_ok());
    }

    #[test]
    fn constructors_are_valid_classic_lattices() {
        for name in ["q2", "q2(sqrt(5))", "q2(sqrt(2))", "q2(sqrt(3))", "q2(sqrt(-1))"] {
            let f = Field::shared(name);
            for n in [2usize, 4] {
                let mut all = vec![c1_even(f, n).unwrap()];
                if f.e == 1 {
                    all.push(c2_even(f, n).unwrap());
                }
                for (d, t) in pc_set(f) {
                    all.push(c3_even(f, n, &d, t).unwrap());
                    all.push(c4_even(f, n, &d, t).unwrap());
                }
                for l in &all {
                    assert!(l.is_classic(), "{name}: C^E {l} not classic");
                    assert_eq!(l.rank(), n);
                }
            }
            for n in [3usize, 5] {
                for u in &f.units {
                    for l in [
                        c1_odd(f, n, u).unwrap(),
                        c2_odd(f, n, u).unwrap(),
                        c3_odd(f, n, u).unwrap(),
                        c4_odd(f, n, u).unwrap(),
                        c4bar_odd(f, n, u).unwrap(),
                    ] {
                        assert!(l.is_classic(), "{name}: C^O {l} not classic");
                        assert_eq!(l.rank(), n);
                    }
                }
            }
        }
    }

    #[test]
    fn hyperbolic_range() {
        let f = Field::shared("q2(sqrt(2))");
        assert!(hyperbolic(f, 2, 1).is_ok());
        assert!(hyperbolic(f, 3, 1).is_err());
        assert!(hyperbolic(f, -1, 1).is_err());
        assert_eq!(hyperbolic(f, 0, 3).unwrap().rank(), 6);
    }
}
