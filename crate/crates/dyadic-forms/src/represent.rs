//! The lattice representation theorem: pair invariants d[c·a_{1,i}·b_{1,j}]
//! and A_i(M,N), the four conditions B₁–B₄ with their exact index ranges, and
//! the top-level decider `represents(M, N)`.
//!
//! Throughout, M ≅ ≺a₁,…,a_m≻ and N ≅ ≺b₁,…,b_n≻ relative to good BONGs with
//! n ≤ m; R_i, α_i belong to M and S_i, β_i to N. N → M holds iff FN → FM and
//! B₁–B₄ all hold.

use crate::blattice::Bong;
use crate::ext::Ext;
use crate::localfield::{Elem, Field};
use crate::qspace::{represents_space, space_of_diagonal};

#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("lattices live over different fields: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("rank order violated: rank N = {n} > rank M = {m}")]
    RankOrder { m: usize, n: usize },
    #[error("index out of range: {0}")]
    Index(String),
}

/// The immutable pair (M, N) with both caches in scope.
pub struct PairContext<'a> {
    pub m: &'a Bong,
    pub n: &'a Bong,
}

impl<'a> PairContext<'a> {
    pub fn new(m: &'a Bong, n: &'a Bong) -> Result<PairContext<'a>, RepError> {
        if m.field.name != n.field.name {
            return Err(RepError::FieldMismatch(m.field.name.clone(), n.field.name.clone()));
        }
        if n.rank() > m.rank() {
            return Err(RepError::RankOrder { m: m.rank(), n: n.rank() });
        }
        Ok(PairContext { m, n })
    }

    fn f(&self) -> &'static Field {
        self.m.field
    }

    /// d[c·a_{1,i}·b_{1,j}] = min{d(c·a_{1,i}·b_{1,j}), α_i, β_j}, ignoring
    /// α_i when i ∈ {0, m} and β_j when j ∈ {0, n}.
    pub fn d_bracket_pair(&self, c: &Elem, i: usize, j: usize) -> Ext {
        let (m, n) = (self.m.rank(), self.n.rank());
        assert!(i <= m && j <= n, "d[c a_(1,{i}) b_(1,{j})] out of range");
        let prod = c.mul(&self.m.prod(1, i)).mul(&self.n.prod(1, j));
        let mut best = self.f().quadratic_defect(&prod);
        if i >= 1 && i <= m - 1 {
            best = best.min(self.m.alpha(i));
        }
        if j >= 1 && j <= n - 1 {
            best = best.min(self.n.alpha(j));
        }
        best
    }

    /// A_i(M,N) for 1 ≤ i ≤ min{m−1, n}:
    /// min{(R_{i+1}−S_i)/2 + e,
    ///     R_{i+1}−S_i + d[−a_{1,i+1}b_{1,i−1}],
    ///     R_{i+1}+R_{i+2}−S_{i−1}−S_i + d[a_{1,i+2}b_{1,i−2}]},
    /// the third term being ignored when i ∈ {1, m−1}.
    pub fn a_cond(&self, i: usize) -> Ext {
        let (m, n) = (self.m.rank(), self.n.rank());
        assert!(
            i >= 1 && i <= (m - 1).min(n),
            "A_{i} out of range 1..=min(m-1,n) = {}",
            (m - 1).min(n)
        );
        let e = self.f().e;
        let one = self.f().one();
        let r = |k: usize| self.m.r(k);
        let s = |k: usize| self.n.r(k);
        let mut best = Ext::half(r(i + 1) - s(i) + 2 * e);
        best = best.min(
            Ext::int(r(i + 1) - s(i)) + self.d_bracket_pair(&self.f().int(-1), i + 1, i - 1),
        );
        if i != 1 && i != m - 1 {
            best = best.min(
                Ext::int(r(i + 1) + r(i + 2) - s(i - 1) - s(i))
                    + self.d_bracket_pair(&one, i + 2, i - 2),
            );
        }
        best
    }

    /// S_{n+1} + A_{n+1}, defined when n ≤ m−2:
    /// min{R_{n+2} + d[−a_{1,n+2}b_{1,n}],
    ///     R_{n+2}+R_{n+3}−S_n + d[a_{1,n+3}b_{1,n−1}]},
    /// the second term being ignored when n = m−2.
    pub fn s_plus_a_top(&self) -> Option<Ext> {
        let (m, n) = (self.m.rank(), self.n.rank());
        if n + 2 > m {
            return None;
        }
        let mut best = Ext::int(self.m.r(n + 2))
            + self.d_bracket_pair(&self.f().int(-1), n + 2, n);
        if n + 2 != m {
            best = best.min(
                Ext::int(self.m.r(n + 2) + self.m.r(n + 3) - self.n.r(n))
                    + self.d_bracket_pair(&self.f().one(), n + 3, n - 1),
            );
        }
        Some(best)
    }

    /// B₁(i) for 1 ≤ i ≤ n: R_i ≤ S_i, or 1 < i < m and R_i+R_{i+1} ≤ S_{i−1}+S_i.
    pub fn b1(&self, i: usize) -> bool {
        let m = self.m.rank();
        self.m.r(i) <= self.n.r(i)
            || (1 < i
                && i < m
                && self.m.r(i) + self.m.r(i + 1) <= self.n.r(i - 1) + self.n.r(i))
    }

    /// B₂(i) for 1 ≤ i ≤ min{m−1, n}: d[a_{1,i}b_{1,i}] ≥ A_i(M,N).
    pub fn b2(&self, i: usize) -> bool {
        self.d_bracket_pair(&self.f().one(), i, i) >= self.a_cond(i)
    }

    /// P_k(M,N) = (a_{1,k}b_{1,k}, −a_{1,k+1}b_{1,k−1})_𝔭.
    pub fn p_k(&self, k: usize) -> i8 {
        let lhs = self.m.prod(1, k).mul(&self.n.prod(1, k));
        let rhs = self.m.prod(1, k + 1).mul(&self.n.prod(1, k - 1)).neg();
        self.f().hilbert(&lhs, &rhs)
    }

    /// B₃(i) for 1 < i ≤ min{m−1, n+1}: if R_{i+1} > S_{i−1} and
    /// d[−a_{1,i}b_{1,i−2}] + d[−a_{1,i+1}b_{1,i−1}] > 2e + S_{i−1} − R_{i+1},
    /// then ∏_{k=1}^{i−1} P_k(M,N) = 1.
    pub fn b3(&self, i: usize) -> bool {
        let e = self.f().e;
        let minus_one = self.f().int(-1);
        if self.m.r(i + 1) <= self.n.r(i - 1) {
            return true;
        }
        let lhs = self.d_bracket_pair(&minus_one, i, i - 2)
            + self.d_bracket_pair(&minus_one, i + 1, i - 1);
        if lhs <= Ext::int(2 * e + self.n.r(i - 1) - self.m.r(i + 1)) {
            return true;
        }
        (1..i).map(|k| self.p_k(k)).product::<i8>() == 1
    }

    /// B₄(i) for 1 < i ≤ min{m−2, n+1}: if S_i ≥ R_{i+2} > S_{i−1}+2e ≥
    /// R_{i+1}+2e (the first inequality being ignored when i = n+1), then
    /// [b₁,…,b_{i−1}] → [a₁,…,a_{i+1}].
    pub fn b4(&self, i: usize) -> bool {
        let e = self.f().e;
        let n = self.n.rank();
        let upper_ok = i == n + 1 || self.n.r(i) >= self.m.r(i + 2);
        let trigger = upper_ok
            && self.m.r(i + 2) > self.n.r(i - 1) + 2 * e
            && self.n.r(i - 1) >= self.m.r(i + 1);
        if !trigger {
            return true;
        }
        let f = self.f();
        let v = space_of_diagonal(f, &self.m.entries[..i + 1]).unwrap();
        let w = space_of_diagonal(f, &self.n.entries[..i - 1]).unwrap();
        represents_space(f, &v, &w).unwrap()
    }

    fn b1_range(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n.rank()
    }

    fn b2_range(&self) -> std::ops::RangeInclusive<usize> {
        1..=(self.m.rank() - 1).min(self.n.rank())
    }

    fn b3_range(&self) -> std::ops::RangeInclusive<usize> {
        2..=(self.m.rank() - 1).min(self.n.rank() + 1)
    }

    fn b4_range(&self) -> std::ops::RangeInclusive<usize> {
        2..=self.m.rank().saturating_sub(2).min(self.n.rank() + 1)
    }
}

/// Full evaluation record of the representation conditions for one pair.
pub struct RepReport {
    /// FN → FM at the space level.
    pub space_ok: bool,
    /// (index, holds) for each condition over its exact range.
    pub b1: Vec<(usize, bool)>,
    pub b2: Vec<(usize, bool)>,
    pub b3: Vec<(usize, bool)>,
    pub b4: Vec<(usize, bool)>,
    pub verdict: bool,
    /// First failed clause, e.g. "space", "B1(3)".
    pub first_failure: Option<String>,
}

/// Decide N → M and record every condition along the way.
pub fn represents(m: &Bong, n: &Bong) -> Result<RepReport, RepError> {
    let ctx = PairContext::new(m, n)?;
    let f = ctx.f();
    let space_ok = represents_space(f, &m.space(), &n.space()).expect("rank order checked");
    let b1: Vec<(usize, bool)> = ctx.b1_range().map(|i| (i, ctx.b1(i))).collect();
    let b2: Vec<(usize, bool)> = ctx.b2_range().map(|i| (i, ctx.b2(i))).collect();
    let b3: Vec<(usize, bool)> = ctx.b3_range().map(|i| (i, ctx.b3(i))).collect();
    let b4: Vec<(usize, bool)> = ctx.b4_range().map(|i| (i, ctx.b4(i))).collect();
    let mut first_failure = None;
    if !space_ok {
        first_failure = Some("space".to_string());
    } else {
        for (tag, list) in [("B1", &b1), ("B2", &b2), ("B3", &b3), ("B4", &b4)] {
            if let Some((i, _)) = list.iter().find(|(_, ok)| !ok) {
                first_failure = Some(format!("{tag}({i})"));
                break;
            }
        }
    }
    Ok(RepReport {
        space_ok,
        b1,
        b2,
        b3,
        b4,
        verdict: first_failure.is_none(),
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blattice::validate_good_bong;
    use crate::localfield::Field;

    fn bong(f: &'static Field, entries: &[Elem]) -> Bong {
        validate_good_bong(f, entries).unwrap()
    }

    #[test]
    fn worked_examples_q2() {
        let f = Field::shared("q2");
        // ≺2, −2⁻¹≻ = 𝐇₁ is represented by ≺1, −1, −5≻
        let m = bong(f, &[f.one(), f.int(-1), f.int(-5)]);
        let n = bong(f, &[f.int(2), f.int(2).inv().neg()]);
        assert!(represents(&m, &n).unwrap().verdict);
        // [3] is not represented by ⟨1,1⟩ (x²+y² ≢ 3 mod 8)
        let m2 = bong(f, &[f.one(), f.one()]);
        let n2 = bong(f, &[f.int(3)]);
        let rep = represents(&m2, &n2).unwrap();
        assert!(!rep.verdict);
        assert!(rep.first_failure.is_some());
        // but ⟨1,1,1⟩ does represent [3]
        let m3 = bong(f, &[f.one(), f.one(), f.one()]);
        assert!(represents(&m3, &n2).unwrap().verdict);
    }

    #[test]
    fn identity_is_represented() {
        let f = Field::shared("q2");
        for entries in [
            vec![f.one(), f.int(3), f.int(10)],
            vec![f.pi, f.pi.inv().neg()],
            vec![f.one(), f.one(), f.int(2), f.int(14)],
        ] {
            let m = bong(f, &entries);
            let rep = represents(&m, &m).unwrap();
            assert!(rep.verdict, "self-representation failed: {:?}", rep.first_failure);
        }
    }

    #[test]
    fn rank_and_field_errors() {
        let f = Field::shared("q2");
        let f2 = Field::shared("q2(sqrt(2))");
        let small = bong(f, &[f.one()]);
        let big = bong(f, &[f.one(), f.one()]);
        assert!(matches!(represents(&small, &big), Err(RepError::RankOrder { .. })));
        let other = bong(f2, &[f2.one()]);
        assert!(matches!(represents(&big, &other), Err(RepError::FieldMismatch(..))));
    }

    #[test]
    fn pair_quantities_ranges() {
        let f = Field::shared("q2");
        let m = bong(f, &[f.one(), f.one(), f.one(), f.one()]);
        let n = bong(f, &[f.one(), f.int(3)]);
        let ctx = PairContext::new(&m, &n).unwrap();
        // A_i defined for 1..=min(3,2)
        let _ = ctx.a_cond(1);
        let _ = ctx.a_cond(2);
        // n = 2 ≤ m−2 = 2: S₃+A₃ defined, second term ignored (n = m−2)
        assert!(ctx.s_plus_a_top().is_some());
        let n3 = bong(f, &[f.one(), f.int(3), f.int(7)]);
        let ctx3 = PairContext::new(&m, &n3).unwrap();
        assert!(ctx3.s_plus_a_top().is_none());
    }
}
