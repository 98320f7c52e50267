//! Bounded J-set witness search and the witness transfer to the AP-lift.
//!
//! A J-set witness for a finite family `F` of sequences is a pair `(a, H)`
//! with `a + Σ_{t∈H} f(t) ∈ A` for every `f ∈ F`. Search is bounded by
//! `a <= a_max` and the family horizon `T` (`H ⊆ [1, T]`); absence at a bound
//! says nothing about the infinite set.
//!
//! The transfer takes a 2D family `f_i = (g_{2i-1}, g_{2i})`, builds the 1D
//! family `g_{2i-1} + j·(b + g_{2i})` for `j = 0..=l`, finds a 1D witness
//! `(a, H)`, and returns `((a, b·|H|), H)`, a witness for the lift of `A`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lift::{verify_ap, ApWitness};
use crate::par;
use crate::sets::{parse_positive, IntSet};

/// Largest supported horizon `T`.
pub const MAX_HORIZON: usize = 24;

/// Sequences `f_1 … f_m`, each tabulated on `[1, T]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FuncFamily {
    horizon: usize,
    funcs: Vec<Vec<u64>>,
}

fn check_rows(rows: &[Vec<u64>]) -> Result<usize> {
    let t = rows.first().map(Vec::len).unwrap_or(0);
    if rows.is_empty() || t == 0 || t > MAX_HORIZON {
        return Err(Error::ParamOutOfRange(format!("family needs m >= 1 and 1 <= T <= {MAX_HORIZON}")));
    }
    if rows.iter().any(|r| r.len() != t) {
        return Err(Error::ParamOutOfRange("all sequences must share the horizon T".into()));
    }
    if rows.iter().flatten().any(|&v| v == 0) {
        return Err(Error::ParamOutOfRange("sequence values must be >= 1".into()));
    }
    Ok(t)
}

impl FuncFamily {
    pub fn new(funcs: Vec<Vec<u64>>) -> Result<Self> {
        let horizon = check_rows(&funcs)?;
        Ok(FuncFamily { horizon, funcs })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn funcs(&self) -> &[Vec<u64>] {
        &self.funcs
    }

    /// `Σ_{t∈H} f(t)` for one sequence; `H` is 1-based.
    fn sum_over(f: &[u64], h: &[usize]) -> u64 {
        h.iter().fold(0u64, |acc, &t| acc.saturating_add(f[t - 1]))
    }

    /// `family m T`, then `m` rows of `T` values.
    pub fn to_file(&self) -> String {
        let mut s = format!("family {} {}\n", self.funcs.len(), self.horizon);
        for f in &self.funcs {
            s.push_str(&f.iter().join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let (rows, t) = parse_family_rows(text, "family", 1)?;
        FuncFamily::new(rows).and_then(|f| check_horizon(f, t))
    }
}

fn check_horizon(f: FuncFamily, t: usize) -> Result<FuncFamily> {
    if f.horizon != t {
        return Err(Error::Format { line: 1, msg: format!("header says T = {t}, rows have {}", f.horizon) });
    }
    Ok(f)
}

/// Reads `<tag> m T` and `m * per` rows of `T` positive integers.
fn parse_family_rows(text: &str, tag: &str, per: usize) -> Result<(Vec<Vec<u64>>, usize)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (no, header) = lines.next().ok_or(Error::Format { line: 1, msg: "empty family file".into() })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != tag {
        return Err(Error::Format { line: no + 1, msg: format!("expected `{tag} m T`") });
    }
    let m = parse_positive(toks[1], no + 1)? as usize;
    let t = parse_positive(toks[2], no + 1)? as usize;
    let rows = lines
        .map(|(no, l)| l.split_whitespace().map(|tok| parse_positive(tok, no + 1)).collect::<Result<Vec<u64>>>())
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != m * per {
        return Err(Error::Format { line: no + 1, msg: format!("expected {} rows, found {}", m * per, rows.len()) });
    }
    Ok((rows, t))
}

/// Pairs `f_i = (g_{2i-1}, g_{2i})` of sequences on `[1, T]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FuncFamily2D {
    horizon: usize,
    pairs: Vec<(Vec<u64>, Vec<u64>)>,
}

impl FuncFamily2D {
    pub fn new(pairs: Vec<(Vec<u64>, Vec<u64>)>) -> Result<Self> {
        let rows: Vec<Vec<u64>> = pairs.iter().flat_map(|(x, y)| [x.clone(), y.clone()]).collect();
        let horizon = check_rows(&rows)?;
        Ok(FuncFamily2D { horizon, pairs })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn pairs(&self) -> &[(Vec<u64>, Vec<u64>)] {
        &self.pairs
    }

    /// `family2d m T`, then `2m` rows alternating first and second coordinates.
    pub fn to_file(&self) -> String {
        let mut s = format!("family2d {} {}\n", self.pairs.len(), self.horizon);
        for (x, y) in &self.pairs {
            s.push_str(&x.iter().join(" "));
            s.push('\n');
            s.push_str(&y.iter().join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let (rows, t) = parse_family_rows(text, "family2d", 2)?;
        let pairs = rows.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
        let f = FuncFamily2D::new(pairs)?;
        if f.horizon != t {
            return Err(Error::Format { line: 1, msg: format!("header says T = {t}, rows have {}", f.horizon) });
        }
        Ok(f)
    }
}

/// `(a, H)` with `H` sorted, 1-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct JWitness {
    pub a: u64,
    pub h: Vec<usize>,
}

/// `((a₁, a₂), H)` for the lifted set in ℕ × ℕ.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct JWitness2D {
    pub a: (u64, u64),
    pub h: Vec<usize>,
}

fn check_h(h: &[usize], horizon: usize) -> Result<()> {
    if h.is_empty() {
        return Err(Error::MalformedWitness("H is empty".into()));
    }
    if h.iter().any(|&t| t == 0 || t > horizon) {
        return Err(Error::MalformedWitness(format!("H = {h:?} is not inside [1, {horizon}]")));
    }
    if h.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::MalformedWitness(format!("H = {h:?} is not strictly increasing")));
    }
    Ok(())
}

/// First witness in the order: `|H|` ascending, then `H` lexicographically, then `a` ascending.
pub fn jset_witness(set: &IntSet, family: &FuncFamily, a_max: u64) -> Result<Option<JWitness>> {
    if a_max == 0 {
        return Err(Error::ParamOutOfRange("a_max must be >= 1".into()));
    }
    let lo = set.window().lo() as i64;
    for k in 1..=family.horizon {
        let candidates: Vec<Vec<usize>> = (1..=family.horizon).combinations(k).collect();
        let hit = par::find_first_in(&candidates, |h| {
            // bit a-1 of `ok` set iff a + Σf ∈ A for every f so far.
            let mut ok = crate::bits::Bits::ones(a_max as usize);
            for f in &family.funcs {
                let s = FuncFamily::sum_over(f, h).min(i64::MAX as u64 / 2) as i64;
                ok.and_assign(&set.bits().window_slice(1 + s - lo, a_max as usize));
                if ok.none() {
                    return None;
                }
            }
            ok.first_one().map(|i| JWitness { a: i as u64 + 1, h: h.clone() })
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// True iff `a + Σ_{t∈H} f(t) ∈ A` for every `f`.
pub fn verify_jwitness(set: &IntSet, family: &FuncFamily, w: &JWitness) -> Result<bool> {
    check_h(&w.h, family.horizon)?;
    if w.a == 0 {
        return Err(Error::MalformedWitness("a must be >= 1".into()));
    }
    Ok(family.funcs.iter().all(|f| set.contains(w.a.saturating_add(FuncFamily::sum_over(f, &w.h)))))
}

/// The family `{ t ↦ g_{2i-1}(t) + j·(b + g_{2i}(t)) : i ∈ [1, m], j ∈ [0, l] }`, `i` outer, `j` inner.
pub fn build_transfer_family(family: &FuncFamily2D, b: u64, l: u64) -> Result<FuncFamily> {
    if b == 0 || l == 0 {
        return Err(Error::ParamOutOfRange("b and l must be >= 1".into()));
    }
    let funcs = family
        .pairs
        .iter()
        .flat_map(|(odd, even)| {
            (0..=l).map(move |j| odd.iter().zip(even).map(|(&x, &y)| x + j * (b + y)).collect::<Vec<u64>>())
        })
        .collect();
    FuncFamily::new(funcs)
}

/// Lifts a 1D witness over the transfer family to `((a, b·|H|), H)`; the result is
/// checked against [`verify_jwitness2d`] and a failure is reported as
/// [`Error::TransferFault`].
pub fn transfer_witness(set: &IntSet, family: &FuncFamily2D, b: u64, l: u64, a_max: u64) -> Result<Option<JWitness2D>> {
    let g = build_transfer_family(family, b, l)?;
    let Some(w) = jset_witness(set, &g, a_max)? else {
        return Ok(None);
    };
    let lifted = JWitness2D { a: (w.a, b * w.h.len() as u64), h: w.h };
    if !verify_jwitness2d(set, family, l, &lifted)? {
        return Err(Error::TransferFault(format!("{lifted:?} does not land in the lift")));
    }
    Ok(Some(lifted))
}

/// The pair `(a₁ + Σ g_{2i-1}, a₂ + Σ g_{2i})` for each `f_i`.
pub fn lifted_points(family: &FuncFamily2D, w: &JWitness2D) -> Vec<(u64, u64)> {
    family
        .pairs
        .iter()
        .map(|(odd, even)| {
            (
                w.a.0.saturating_add(FuncFamily::sum_over(odd, &w.h)),
                w.a.1.saturating_add(FuncFamily::sum_over(even, &w.h)),
            )
        })
        .collect()
}

/// True iff every point of [`lifted_points`] starts an `(l+1)`-term progression in `set`.
pub fn verify_jwitness2d(set: &IntSet, family: &FuncFamily2D, l: u64, w: &JWitness2D) -> Result<bool> {
    check_h(&w.h, family.horizon)?;
    if w.a.0 == 0 || w.a.1 == 0 {
        return Err(Error::MalformedWitness("both coordinates of a must be >= 1".into()));
    }
    Ok(lifted_points(family, w).into_iter().all(|(a, d)| verify_ap(set, &ApWitness { a, d, l })))
}
