//! Gram-matrix intake (greedy norm-generator extraction) and the JSON
//! lattice literal format:
//!
//! ```json
//! {"field": "q2(sqrt(2))", "bong": ["1", "1", "2+sqrt(2)"]}
//! {"field": "q2", "blocks": [{"diag": ["1", "3"]},
//!                            {"A": ["0", "0"], "scale": "2"},
//!                            {"H": 1}]}
//! ```

use super::{Bong, BongError};
use crate::localfield::{parse_elem, shared_field, Elem, Field};
use serde::Deserialize;

/// Extract a good BONG from a symmetric Gram matrix, best-effort.
///
/// At each stage the next BONG entry must be a norm generator, i.e. a vector
/// of minimal Q-valuation; among the spanning candidates e_i and e_i + e_j
/// (which always generate the norm ideal) every minimal-valuation choice is
/// tried depth-first, in enumeration order (e₁,…,e_k, then sums in
/// lexicographic (i,j) order), splitting the chosen vector off orthogonally
/// and recursing on the projected complement. The first chain whose full BONG
/// validates as good wins. Inputs for which no tried chain is good are
/// rejected with the raw entries of the first chain attached.
pub fn bong_from_gram(f: &'static Field, gram: &[Vec<Elem>]) -> Result<Bong, BongError> {
    let k = gram.len();
    for row in gram {
        if row.len() != k {
            return Err(BongError::Parameter("Gram matrix is not square".to_string()));
        }
    }
    for i in 0..k {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(BongError::Parameter(format!(
                    "Gram matrix is not symmetric at ({i},{j})"
                )));
            }
        }
    }
    let mut search = GramSearch { f, budget: 2000, first_raw: None };
    let mut entries = Vec::with_capacity(k);
    match search.dfs(gram.to_vec(), &mut entries) {
        Ok(Some(bong)) => Ok(bong),
        Ok(None) => {
            let raw = search.first_raw.unwrap_or_default();
            let err = Bong::new(f, raw.clone()).expect_err("raw chain failed validation");
            Err(BongError::NotGoodFromGram {
                raw: raw.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", "),
                source: Box::new(err),
            })
        }
        Err(e) => Err(e),
    }
}

struct GramSearch {
    f: &'static Field,
    /// Remaining leaf validations before giving up (keeps ties from blowing
    /// up on large very symmetric inputs).
    budget: u32,
    first_raw: Option<Vec<Elem>>,
}

impl GramSearch {
    fn dfs(
        &mut self,
        g: Vec<Vec<Elem>>,
        entries: &mut Vec<Elem>,
    ) -> Result<Option<Bong>, BongError> {
        let n = g.len();
        if n == 0 {
            if self.budget == 0 {
                return Ok(None);
            }
            self.budget -= 1;
            return match Bong::new(self.f, entries.clone()) {
                Ok(b) => Ok(Some(b)),
                Err(_) => {
                    if self.first_raw.is_none() {
                        self.first_raw = Some(entries.clone());
                    }
                    Ok(None)
                }
            };
        }
        // Candidate coordinate vectors: e_i, then e_i + e_j (i < j).
        let mut cands: Vec<(usize, Option<usize>)> = (0..n).map(|i| (i, None)).collect();
        for i in 0..n {
            for j in i + 1..n {
                cands.push((i, Some(j)));
            }
        }
        let q_of = |c: &(usize, Option<usize>)| -> Elem {
            match c.1 {
                None => g[c.0][c.0],
                Some(j) => {
                    let i = c.0;
                    g[i][i].add(&g[j][j]).add(&g[i][j]).add(&g[i][j])
                }
            }
        };
        let min_ord = cands
            .iter()
            .filter_map(|c| q_of(c).ord())
            .min()
            .ok_or(BongError::DegenerateGram)?;
        for c in &cands {
            let q = q_of(c);
            if q.ord() != Some(min_ord) {
                continue;
            }
            // B(e_t, x) for the chosen x.
            let bx: Vec<Elem> = (0..n)
                .map(|t| match c.1 {
                    None => g[t][c.0],
                    Some(j) => g[t][c.0].add(&g[t][j]),
                })
                .collect();
            // Complement basis: drop e_{i0} where i0 is the first index of x
            // (its coefficient in x is 1, so the rest completes a basis).
            let keep: Vec<usize> = (0..n).filter(|&t| t != c.0).collect();
            // Projected Gram: B(u − (B(u,x)/q)x, v − (B(v,x)/q)x)
            //              = B(u,v) − B(u,x)B(v,x)/q.
            let mut ng = vec![vec![self.f.zero(); n - 1]; n - 1];
            for (s, &is) in keep.iter().enumerate() {
                for (t, &it) in keep.iter().enumerate() {
                    ng[s][t] = g[is][it].sub(&bx[is].mul(&bx[it]).div(&q));
                }
            }
            entries.push(q);
            let found = self.dfs(ng, entries)?;
            entries.pop();
            if found.is_some() {
                return Ok(found);
            }
            if self.budget == 0 {
                break;
            }
        }
        Ok(None)
    }
}

/// One block of a lattice literal.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum BlockLit {
    /// Orthogonal diagonal entries ⟨a₁,…⟩ (a single string is also accepted).
    Diag { diag: DiagLit },
    /// γ·A(ξ,η): Gram γ[[ξ,1],[1,η]]; `scale` defaults to 1.
    Bin {
        #[serde(rename = "A")]
        a: [String; 2],
        scale: Option<String>,
    },
    /// 𝐇_ℓ given as A(π^ℓ, 0).
    Hyp {
        #[serde(rename = "H")]
        l: i64,
    },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum DiagLit {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Deserialize)]
struct LatticeFile {
    field: String,
    bong: Option<Vec<String>>,
    blocks: Option<Vec<BlockLit>>,
}

/// Assemble the block-diagonal Gram matrix of a block list.
pub fn gram_from_blocks(f: &'static Field, blocks: &[BlockLit]) -> Result<Vec<Vec<Elem>>, BongError> {
    let parse = |s: &str| parse_elem(f, s).map_err(|e| BongError::Literal(e.to_string()));
    let mut small: Vec<Vec<Vec<Elem>>> = Vec::new();
    for b in blocks {
        match b {
            BlockLit::Diag { diag } => {
                let items: Vec<&str> = match diag {
                    DiagLit::One(s) => vec![s.as_str()],
                    DiagLit::Many(v) => v.iter().map(|s| s.as_str()).collect(),
                };
                for s in items {
                    small.push(vec![vec![parse(s)?]]);
                }
            }
            BlockLit::Bin { a, scale } => {
                let xi = parse(&a[0])?;
                let eta = parse(&a[1])?;
                let gamma = match scale {
                    Some(s) => parse(s)?,
                    None => f.one(),
                };
                if gamma.is_zero() {
                    return Err(BongError::Literal("zero scale on an A-block".to_string()));
                }
                small.push(vec![
                    vec![gamma.mul(&xi), gamma],
                    vec![gamma, gamma.mul(&eta)],
                ]);
            }
            BlockLit::Hyp { l } => {
                if !(0..=f.e).contains(l) {
                    return Err(BongError::Literal(format!(
                        "H block needs 0 <= l <= e, got l = {l}"
                    )));
                }
                small.push(vec![
                    vec![f.pi.pow(*l), f.one()],
                    vec![f.one(), f.zero()],
                ]);
            }
        }
    }
    let total: usize = small.iter().map(|b| b.len()).sum();
    let mut gram = vec![vec![f.zero(); total]; total];
    let mut off = 0;
    for b in &small {
        for (i, row) in b.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                gram[off + i][off + j] = *v;
            }
        }
        off += b.len();
    }
    Ok(gram)
}

/// Parse a lattice literal (JSON text) into a validated [`Bong`].
pub fn lattice_from_json(text: &str) -> Result<Bong, BongError> {
    let file: LatticeFile =
        serde_json::from_str(text).map_err(|e| BongError::Literal(e.to_string()))?;
    let f = shared_field(&file.field).map_err(|e| BongError::Literal(e.to_string()))?;
    match (file.bong, file.blocks) {
        (Some(bong), None) => {
            let mut entries = Vec::with_capacity(bong.len());
            for s in &bong {
                entries.push(parse_elem(f, s).map_err(|e| BongError::Literal(e.to_string()))?);
            }
            Bong::new(f, entries)
        }
        (None, Some(blocks)) => {
            let gram = gram_from_blocks(f, &blocks)?;
            bong_from_gram(f, &gram)
        }
        _ => Err(BongError::Literal(
            "expected exactly one of \"bong\" or \"blocks\"".to_string(),
        )),
    }
}
