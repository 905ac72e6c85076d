//! Lattices presented by good BONGs (Bases Of Norm Generators): validity,
//! integrality, the invariants R_i, α_i, μ_i, δ_i, the single-lattice d[·]
//! quantities, the standard constructors (𝐇_ℓ and the test-set bricks), and
//! Gram-matrix / JSON intake.
//!
//! Index conventions follow the mathematical source: the entries of a rank-m
//! BONG are a₁,…,a_m; R_i = ord a_i is defined for 1 ≤ i ≤ m and α_i for
//! 1 ≤ i ≤ m−1. All public accessors take those 1-based indices.

mod construct;
mod gram;

pub use construct::{
    c1_even, c1_odd, c2_even, c2_odd, c3_even, c3_odd, c4_even, c4_odd, c4bar_odd, hyperbolic,
    pc_set,
};
pub use gram::{bong_from_gram, gram_from_blocks, lattice_from_json, BlockLit};

use crate::ext::{Ext, Inf};
use crate::localfield::{Elem, Field};
use crate::qspace::{space_of_diagonal, SpaceInv};
use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum BongError {
    #[error("zero BONG entry at position {0}")]
    ZeroEntry(usize),
    #[error("not a good BONG: {condition} fails at i = {index}")]
    NotGood { index: usize, condition: String },
    #[error("index out of range: {0}")]
    Index(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("degenerate Gram matrix")]
    DegenerateGram,
    #[error("BONG found but not good: [{raw}] ({source})")]
    NotGoodFromGram {
        raw: String,
        #[source]
        source: Box<BongError>,
    },
    #[error("lattice literal: {0}")]
    Literal(String),
}

/// A lattice presented relative to a good BONG, with the R_i and α_i caches
/// populated at construction. Immutable afterwards.
#[derive(Clone)]
pub struct Bong {
    pub field: &'static Field,
    pub entries: Vec<Elem>,
    r: Vec<i64>,
    alpha: Vec<Ext>,
}

impl fmt::Debug for Bong {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bong({} over {})", self, self.field.name)
    }
}

/// Validate the good-BONG conditions and build the lattice.
///
/// Conditions (checked per index, reporting the first violation):
///   R_i ≤ R_{i+2} for 1 ≤ i ≤ m−2;
///   R_{i+1} − R_i + d(−a_i a_{i+1}) ≥ 0 and R_{i+1} − R_i ≥ −2e for
///   1 ≤ i ≤ m−1.
pub fn validate_good_bong(field: &'static Field, entries: &[Elem]) -> Result<Bong, BongError> {
    Bong::new(field, entries.to_vec())
}

impl Bong {
    pub fn new(field: &'static Field, entries: Vec<Elem>) -> Result<Bong, BongError> {
        let m = entries.len();
        let mut r = Vec::with_capacity(m);
        for (k, a) in entries.iter().enumerate() {
            match a.ord() {
                Some(v) => r.push(v),
                None => return Err(BongError::ZeroEntry(k + 1)),
            }
        }
        let e = field.e;
        // d(−a_i a_{i+1}) for i = 1..m−1 (0-based storage).
        let dneg: Vec<Ext> = (0..m.saturating_sub(1))
            .map(|k| field.quadratic_defect(&entries[k].mul(&entries[k + 1]).neg()))
            .collect();
        for i in 1..=m.saturating_sub(1) {
            if i + 1 < m && r[i - 1] > r[i + 1] {
                return Err(BongError::NotGood {
                    index: i,
                    condition: format!("R_i <= R_(i+2) ({} > {})", r[i - 1], r[i + 1]),
                });
            }
            let jump = r[i] - r[i - 1];
            if Ext::int(jump) + dneg[i - 1] < Ext::int(0) {
                return Err(BongError::NotGood {
                    index: i,
                    condition: format!(
                        "R_(i+1) - R_i + d(-a_i a_(i+1)) >= 0 ({jump} + {} < 0)",
                        dneg[i - 1]
                    ),
                });
            }
            if jump < -2 * e {
                return Err(BongError::NotGood {
                    index: i,
                    condition: format!("R_(i+1) - R_i >= -2e ({jump} < {})", -2 * e),
                });
            }
        }
        let mut bong = Bong { field, entries, r, alpha: Vec::new() };
        bong.alpha = (1..m).map(|i| bong.alpha_full(i, &dneg)).collect();
        // The concise formula is a consistency condition between α and d[·];
        // it must be a fixed point of the computed vector.
        for i in 1..m {
            debug_assert_eq!(bong.alpha[i - 1], bong.alpha_concise(i), "Eq-consistency at {i}");
        }
        Ok(bong)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    /// a_i (1-based).
    pub fn a(&self, i: usize) -> Elem {
        self.entries[i - 1]
    }

    /// R_i = ord a_i (1-based).
    pub fn r(&self, i: usize) -> i64 {
        self.r[i - 1]
    }

    /// α_i for 1 ≤ i ≤ m−1 (cached).
    pub fn alpha(&self, i: usize) -> Ext {
        assert!((1..self.rank()).contains(&i), "alpha index {i} out of 1..m-1");
        self.alpha[i - 1]
    }

    /// The full minimum of the α definition:
    /// α_i = min of {(R_{i+1}−R_i)/2 + e}
    ///          ∪ {R_{i+1}−R_j+d(−a_j a_{j+1}) : 1 ≤ j ≤ i}
    ///          ∪ {R_{j+1}−R_i+d(−a_j a_{j+1}) : i ≤ j ≤ m−1}.
    fn alpha_full(&self, i: usize, dneg: &[Ext]) -> Ext {
        let e = self.field.e;
        let mut best = Ext::half(self.r[i] - self.r[i - 1] + 2 * e);
        for j in 1..=i {
            best = best.min(Ext::int(self.r[i] - self.r[j - 1]) + dneg[j - 1]);
        }
        for j in i..self.rank() {
            best = best.min(Ext::int(self.r[j] - self.r[i - 1]) + dneg[j - 1]);
        }
        best
    }

    /// The concise form α_i = min{(R_{i+1}−R_i)/2+e, R_{i+1}−R_i+d[−a_i a_{i+1}]},
    /// which the cached values satisfy as a fixed point.
    pub fn alpha_concise(&self, i: usize) -> Ext {
        assert!((1..self.rank()).contains(&i), "alpha index {i} out of 1..m-1");
        let e = self.field.e;
        let jump = self.r[i] - self.r[i - 1];
        let d = self.d_bracket(&self.field.int(-1), i, i + 1);
        Ext::half(jump + 2 * e).min(Ext::int(jump) + d)
    }

    /// a_{i,j} = a_i ⋯ a_j; the empty product (j = i−1) is 1.
    pub fn prod(&self, i: usize, j: usize) -> Elem {
        assert!(i >= 1 && j + 1 >= i && j <= self.rank(), "a_({i},{j}) out of range");
        let mut p = self.field.one();
        for k in i..=j {
            p = p.mul(&self.entries[k - 1]);
        }
        p
    }

    /// d[c·a_{i,j}] = min{d(c·a_{i,j}), α_{i−1}, α_j}, where α_{i−1} is
    /// ignored when i−1 ∈ {0, m} and α_j is ignored when j ∈ {0, m}.
    pub fn d_bracket(&self, c: &Elem, i: usize, j: usize) -> Ext {
        let m = self.rank();
        assert!(i >= 1 && j + 1 >= i && j <= m, "d[c a_({i},{j})] out of range");
        let mut best = self.field.quadratic_defect(&c.mul(&self.prod(i, j)));
        if i - 1 >= 1 && i - 1 <= m - 1 {
            best = best.min(self.alpha[i - 2]);
        }
        if j >= 1 && j <= m - 1 {
            best = best.min(self.alpha[j - 1]);
        }
        best
    }

    /// Integral ⟺ R₁ ≥ 0.
    pub fn is_integral(&self) -> bool {
        self.rank() == 0 || self.r[0] >= 0
    }

    /// Classic integral ⟺ R₁ ≥ 0 and R₁+R₂ ≥ 0 (ord 𝔰L ≥ 0).
    pub fn is_classic(&self) -> bool {
        match self.rank() {
            0 => true,
            1 => self.r[0] >= 0,
            _ => self.r[0] >= 0 && self.r[0] + self.r[1] >= 0,
        }
    }

    /// ord 𝔰L = min{R₁, (R₁+R₂)/2} as a half-integer.
    pub fn scale_ord(&self) -> Ext {
        match self.rank() {
            0 => Inf,
            1 => Ext::int(self.r[0]),
            _ => Ext::int(self.r[0]).min(Ext::half(self.r[0] + self.r[1])),
        }
    }

    /// μ_i = a_i π^{−R_i}, the unit part of a_i relative to the fixed
    /// uniformizer.
    pub fn mu(&self, i: usize) -> Elem {
        self.a(i).mul(&self.field.pi.pow(-self.r(i)))
    }

    /// δ_i ∈ 𝒰 with δ_i ∈ (−1)^{i/2} μ₁⋯μ_i 𝒪^{×2}, defined for even i.
    pub fn delta_lower(&self, i: usize) -> Result<Elem, BongError> {
        if i % 2 != 0 || i == 0 || i > self.rank() {
            return Err(BongError::Index(format!("delta_i needs even 1 <= i <= m, got {i}")));
        }
        let mut u = if (i / 2) % 2 == 1 { self.field.int(-1) } else { self.field.one() };
        for k in 1..=i {
            u = u.mul(&self.mu(k));
        }
        let (rep, t) = self.field.square_class_rep(&u);
        debug_assert_eq!(t, 0, "product of units must be a unit class");
        Ok(rep)
    }

    /// Invariants of the underlying quadratic space FL.
    pub fn space(&self) -> SpaceInv {
        space_of_diagonal(self.field, &self.entries).expect("BONG entries are nonzero")
    }
}

impl fmt::Display for Bong {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, a) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validity_examples() {
        let f = Field::shared("q2");
        // 𝐇_e over ℚ₂: ≺π, −π⁻¹≻
        let h = validate_good_bong(f, &[f.pi, f.pi.inv().neg()]).unwrap();
        assert_eq!((h.r(1), h.r(2)), (1, -1));
        assert!(h.is_classic());
        // ≺1, π⁻³≻ violates the −2e bound
        assert!(validate_good_bong(f, &[f.one(), f.pi.pow(-3)]).is_err());
        // ≺π⁻¹, π≻ is a valid BONG but not integral
        let ni = validate_good_bong(f, &[f.pi.inv(), f.pi]).unwrap();
        assert!(!ni.is_integral());
        assert!(validate_good_bong(f, &[f.one(), f.zero()]).is_err());

        let f2 = Field::shared("q2(sqrt(2))");
        let l1 = validate_good_bong(
            f2,
            &[f2.one(), f2.one(), crate::localfield::parse_elem(f2, "2+sqrt(2)").unwrap()],
        )
        .unwrap();
        assert_eq!((l1.r(1), l1.r(2), l1.r(3)), (0, 0, 1));
    }

    #[test]
    fn alpha_values() {
        let f = Field::shared("q2");
        let i3 = validate_good_bong(f, &[f.one(), f.one(), f.one()]).unwrap();
        assert_eq!(i3.alpha(1), Ext::int(1)); // d(−1) = 1 in ℚ₂
        assert_eq!(i3.alpha(2), Ext::int(1));
        let he = validate_good_bong(f, &[f.pi, f.pi.inv().neg()]).unwrap();
        assert_eq!(he.alpha(1), Ext::int(0)); // R₂ − R₁ = −2e

        let f2 = Field::shared("q2(sqrt(2))");
        let l1 = validate_good_bong(
            f2,
            &[f2.one(), f2.one(), crate::localfield::parse_elem(f2, "2+sqrt(2)").unwrap()],
        )
        .unwrap();
        assert_eq!(l1.alpha(1), Ext::int(1)); // §-8-table value
    }

    #[test]
    fn d_bracket_examples() {
        let f = Field::shared("q2");
        let m = validate_good_bong(f, &[f.one(); 4].to_vec()).unwrap();
        // d[(−1)^{(n+2)/2} a_{1,n+2}] with n = 2, m = n+2 = 4: c = (−1)² = 1,
        // both α₀ and α₄ are ignored (i−1 = 0, j = m), so the value is d(1) = ∞.
        assert_eq!(m.d_bracket(&f.one(), 1, 4), Inf);
        // interior range: d[−a_{1,3}] = min{d(−1), α₃} (α₀ still ignored)
        assert_eq!(m.d_bracket(&f.int(-1), 1, 3), Ext::int(1));
        // min property: never exceeds the raw defect
        for i in 1..=4usize {
            for j in i - 1..=4 {
                if j == 0 {
                    continue;
                }
                let raw = f.quadratic_defect(&f.int(-1).mul(&m.prod(i, j)));
                assert!(m.d_bracket(&f.int(-1), i, j) <= raw);
            }
        }
    }

    #[test]
    fn mu_delta_examples() {
        let f = Field::shared("q2");
        let m = validate_good_bong(f, &[f.one(), f.int(3)]).unwrap();
        // δ₂ = rep of −3 ≡ 5 mod 8
        assert_eq!(m.delta_lower(2).unwrap(), f.int(5));
        assert!(m.delta_lower(1).is_err());
        let ones = validate_good_bong(f, &[f.one(); 4].to_vec()).unwrap();
        assert_eq!(ones.delta_lower(2).unwrap(), f.square_class_rep(&f.int(-1)).0);
        assert_eq!(ones.delta_lower(4).unwrap(), f.one());

        let f2 = Field::shared("q2(sqrt(2))");
        let a = crate::localfield::parse_elem(f2, "2+sqrt(2)").unwrap();
        let m2 = validate_good_bong(f2, &[f2.one(), a]).unwrap();
        assert_eq!(m2.mu(2), a.mul(&f2.pi.inv()));
        assert_eq!(m2.mu(2).ord(), Some(0));
    }

    #[test]
    fn scale_ord_examples() {
        let f = Field::shared("q2");
        let he = validate_good_bong(f, &[f.pi, f.pi.inv().neg()]).unwrap();
        assert_eq!(he.scale_ord(), Ext::int(0));
        assert!(he.is_classic());
        let odd = validate_good_bong(f, &[f.pi, f.pi.mul(&f.int(3))]).unwrap();
        assert_eq!(odd.scale_ord(), Ext::int(1));
    }
}
