//! Decreasing chains `C₁ ⊇ C₂ ⊇ … ⊇ C_k` with the translate property
//! "for every `x ∈ C_n` some `C_m ⊆ −x + C_n`", checked on a finite window,
//! and their levelwise AP-lifts.
//!
//! Inclusions are always tested on the truncated window: `C_m ∩ [lo, hi − x]`
//! against `−x + C_n`, since anything above `hi − x` translates out of view.
//! Level searches range over `[n, k]` only; running out of levels is reported
//! as insufficient depth, not as a refutation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::jset::{jset_witness, verify_jwitness, FuncFamily, JWitness};
use crate::largeness::{find_pws_witness, PwsWitness};
use crate::lift::{lift, Box2D, Set2D};
use crate::par;
use crate::sets::{parse_bitstring, parse_positive, parse_window_header, IntSet, Window};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum ChainKind {
    #[serde(rename = "quasi-central")]
    QuasiCentral,
    #[serde(rename = "c-set")]
    CSet,
}

impl fmt::Display for ChainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainKind::QuasiCentral => "quasi-central",
            ChainKind::CSet => "c-set",
        })
    }
}

impl FromStr for ChainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quasi-central" | "qc" => Ok(ChainKind::QuasiCentral),
            "c-set" | "cset" => Ok(ChainKind::CSet),
            _ => Err(Error::ParamOutOfRange(format!("unknown chain kind `{s}`"))),
        }
    }
}

/// Levels on a common window, each nonempty and contained in the previous one.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain {
    levels: Vec<IntSet>,
    kind: ChainKind,
}

impl Chain {
    pub fn new(levels: Vec<IntSet>, kind: ChainKind) -> Result<Self> {
        let Some(first) = levels.first() else {
            return Err(Error::InvalidChain("a chain needs at least one level".into()));
        };
        let w = first.window();
        for (i, c) in levels.iter().enumerate() {
            if c.window() != w {
                return Err(Error::InvalidChain(format!(
                    "level {} has window [{}], expected [{w}]",
                    i + 1,
                    c.window()
                )));
            }
            if c.is_empty() {
                return Err(Error::InvalidChain(format!("level {} is empty", i + 1)));
            }
            if i > 0 && !c.is_subset_of(&levels[i - 1]) {
                return Err(Error::NotDecreasing { level: i + 1, prev: i });
            }
        }
        Ok(Chain { levels, kind })
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn window(&self) -> Window {
        self.levels[0].window()
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Level `n`, 1-based.
    pub fn level(&self, n: usize) -> &IntSet {
        &self.levels[n - 1]
    }

    pub fn levels(&self) -> &[IntSet] {
        &self.levels
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.depth() {
            return Err(Error::ParamOutOfRange(format!("level {n} outside [1, {}]", self.depth())));
        }
        Ok(())
    }

    /// `chain k kind`, then `k` set-file blocks in window form.
    pub fn to_file(&self) -> String {
        let mut s = format!("chain {} {}\n", self.depth(), self.kind);
        for c in &self.levels {
            s.push_str(&c.to_set_file());
        }
        s
    }

    /// Blocks are either `window lo hi` plus a bit-string line, or one line of
    /// integers. Integer blocks take the window of the bitmap blocks, or
    /// `[1, max]` over all levels when there are none.
    pub fn parse_file(text: &str) -> Result<Chain> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (no, header) = lines.next().ok_or(Error::Format { line: 1, msg: "empty chain file".into() })?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 3 || toks[0] != "chain" {
            return Err(Error::Format { line: no + 1, msg: "expected `chain k kind`".into() });
        }
        let k = parse_positive(toks[1], no + 1)? as usize;
        let kind: ChainKind = toks[2].parse().map_err(|e: Error| Error::Format { line: no + 1, msg: e.to_string() })?;

        enum Block {
            Bits(IntSet),
            List(Vec<u64>, usize),
        }
        let mut blocks = Vec::new();
        while let Some((no, line)) = lines.next() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks[0] == "window" {
                let w = parse_window_header(&toks[1..], no + 1)?;
                let (bno, body) =
                    lines.next().ok_or(Error::Format { line: no + 1, msg: "missing bit string".into() })?;
                blocks.push(Block::Bits(parse_bitstring(w, body.trim(), bno + 1)?));
            } else {
                let xs = toks.iter().map(|t| parse_positive(t, no + 1)).collect::<Result<Vec<_>>>()?;
                blocks.push(Block::List(xs, no + 1));
            }
        }
        if blocks.len() != k {
            return Err(Error::Format { line: no + 1, msg: format!("header says {k} levels, found {}", blocks.len()) });
        }
        let window = match blocks.iter().find_map(|b| match b {
            Block::Bits(s) => Some(s.window()),
            Block::List(..) => None,
        }) {
            Some(w) => w,
            None => {
                let max = blocks
                    .iter()
                    .flat_map(|b| match b {
                        Block::List(xs, _) => xs.iter().copied().max(),
                        Block::Bits(_) => None,
                    })
                    .max()
                    .unwrap_or(1);
                Window::new(1, max)?
            }
        };
        let levels = blocks
            .into_iter()
            .map(|b| match b {
                Block::Bits(s) => Ok(s),
                Block::List(xs, line) => {
                    IntSet::from_members(window, xs).map_err(|e| Error::Format { line, msg: e.to_string() })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Chain::new(levels, kind)
    }
}

/// Bitmap (indexed like the chain window) of `⋂_s (−s + C_n)`, cut off above `hi − max s`.
fn translates_meet(c: &IntSet, shifts: &[u64]) -> Option<Bits> {
    let w = c.window();
    let top = *shifts.iter().max()?;
    if top >= w.hi() || w.hi() - top < w.lo() {
        return None;
    }
    let mut meet = Bits::ones(w.width() as usize);
    for &s in shifts {
        meet.and_shifted_down(c.bits(), s as usize);
    }
    meet.truncate_from((w.hi() - top - w.lo() + 1) as usize);
    Some(meet)
}

/// `C_small ∩ [lo, hi − max s] ⊆ ⋂_s (−s + C_big)`.
fn includes_in_translates(small: &IntSet, big: &IntSet, shifts: &[u64]) -> bool {
    match translates_meet(big, shifts) {
        None => true,
        Some(meet) => {
            let w = small.window();
            let mut cut = small.bits().clone();
            cut.truncate_from((w.hi() - shifts.iter().max().unwrap() - w.lo() + 1) as usize);
            cut.is_subset_of(&meet)
        }
    }
}

/// One probe of the translate property.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TranslateProbe {
    /// Level `n` (1-based) and the element `x ∈ C_n`.
    pub n: usize,
    pub x: u64,
    /// Least `m ∈ [n, k]` with `C_m ∩ [lo, hi − x] ⊆ −x + C_n`, if any.
    pub m: Option<usize>,
    /// Upper end `hi − x` of the truncated window.
    pub truncated_hi: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LevelEvidence {
    Pws { r: u64, len: u64, witness: Option<PwsWitness> },
    Jset { witnesses: Vec<Option<JWitness>> },
}

impl LevelEvidence {
    fn holds(&self) -> bool {
        match self {
            LevelEvidence::Pws { witness, .. } => witness.is_some(),
            LevelEvidence::Jset { witnesses } => witnesses.iter().all(Option::is_some),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChainReport {
    pub kind: ChainKind,
    pub x_max: u64,
    pub translate: Vec<TranslateProbe>,
    /// Empty when only the translate property was checked.
    pub levels: Vec<LevelEvidence>,
    pub pass: bool,
}

impl ChainReport {
    pub fn translate_failures(&self) -> impl Iterator<Item = &TranslateProbe> {
        self.translate.iter().filter(|p| p.m.is_none())
    }

    /// Re-checks every recorded claim against `chain` with plain membership loops.
    ///
    /// Found levels must satisfy the inclusion and be least; failed probes must
    /// fail for every level in `[n, k]`; the probe list must cover every
    /// `x ∈ C_n` with `x <= x_max`. Absent J-set witnesses are accepted as
    /// "unknown at this scale"; absent pws witnesses are confirmed by search.
    pub fn reverify(&self, chain: &Chain, families: &[FuncFamily]) -> Result<bool> {
        let hi = chain.window().hi();
        let includes = |m: usize, n: usize, x: u64| {
            chain.level(m).iter().take_while(|&y| y + x <= hi).all(|y| chain.level(n).contains(x + y))
        };
        let expected: Vec<(usize, u64)> = (1..=chain.depth())
            .flat_map(|n| chain.level(n).iter().take_while(|&x| x <= self.x_max).map(move |x| (n, x)))
            .collect();
        if self.kind != chain.kind() || expected.len() != self.translate.len() {
            return Ok(false);
        }
        for (p, &(n, x)) in self.translate.iter().zip(&expected) {
            if (p.n, p.x) != (n, x) || p.truncated_hi != hi.saturating_sub(x) {
                return Ok(false);
            }
            let ok = match p.m {
                Some(m) => {
                    (n..=chain.depth()).contains(&m) && includes(m, n, x) && (n..m).all(|m2| !includes(m2, n, x))
                }
                None => (n..=chain.depth()).all(|m2| !includes(m2, n, x)),
            };
            if !ok {
                return Ok(false);
            }
        }
        if !self.levels.is_empty() && self.levels.len() != chain.depth() {
            return Ok(false);
        }
        for (c, ev) in chain.levels().iter().zip(&self.levels) {
            let ok = match ev {
                LevelEvidence::Pws { r, len, witness: Some(w) } => w.r == *r && w.len == *len && w.verify(c),
                LevelEvidence::Pws { r, len, witness: None } => find_pws_witness(c, *r, *len)?.is_none(),
                LevelEvidence::Jset { witnesses } => {
                    witnesses.len() == families.len()
                        && witnesses.iter().zip(families).all(|(w, f)| match w {
                            Some(w) => verify_jwitness(c, f, w).unwrap_or(false),
                            None => true,
                        })
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        let pass = self.translate.iter().all(|p| p.m.is_some()) && self.levels.iter().all(LevelEvidence::holds);
        Ok(pass == self.pass)
    }
}

/// For every `x ∈ C_n` with `x <= x_max`, finds the least `m ∈ [n, k]` with
/// `C_m ∩ [lo, hi − x] ⊆ −x + C_n`.
pub fn check_translate_property(chain: &Chain, x_max: u64) -> Result<ChainReport> {
    let hi = chain.window().hi();
    if x_max == 0 || x_max > hi {
        return Err(Error::ParamOutOfRange(format!("x_max must lie in [1, {hi}]")));
    }
    let probes: Vec<(usize, u64)> = (1..=chain.depth())
        .flat_map(|n| chain.level(n).iter().take_while(|&x| x <= x_max).map(move |x| (n, x)))
        .collect();
    let translate = par::map_collect(0..probes.len(), |i| {
        let (n, x) = probes[i];
        let m = (n..=chain.depth()).find(|&m| includes_in_translates(chain.level(m), chain.level(n), &[x]));
        TranslateProbe { n, x, m, truncated_hi: hi - x }
    });
    let pass = translate.iter().all(|p| p.m.is_some());
    Ok(ChainReport { kind: chain.kind(), x_max, translate, levels: vec![], pass })
}

/// Translate property plus an `(r, L)` piecewise-syndetic witness at every level.
pub fn check_quasicentral(chain: &Chain, r: u64, len: u64, x_max: u64) -> Result<ChainReport> {
    if chain.kind() != ChainKind::QuasiCentral {
        return Err(Error::Precondition("chain kind must be quasi-central".into()));
    }
    let mut report = check_translate_property(chain, x_max)?;
    report.levels = chain
        .levels()
        .iter()
        .map(|c| Ok(LevelEvidence::Pws { r, len, witness: find_pws_witness(c, r, len)? }))
        .collect::<Result<_>>()?;
    report.pass &= report.levels.iter().all(LevelEvidence::holds);
    Ok(report)
}

/// Translate property plus a J-set witness for every probe family at every level.
pub fn check_cset(chain: &Chain, families: &[FuncFamily], a_max: u64, x_max: u64) -> Result<ChainReport> {
    if chain.kind() != ChainKind::CSet {
        return Err(Error::Precondition("chain kind must be c-set".into()));
    }
    let mut report = check_translate_property(chain, x_max)?;
    report.levels = chain
        .levels()
        .iter()
        .map(|c| {
            let witnesses = families.iter().map(|f| jset_witness(c, f, a_max)).collect::<Result<_>>()?;
            Ok(LevelEvidence::Jset { witnesses })
        })
        .collect::<Result<_>>()?;
    report.pass &= report.levels.iter().all(LevelEvidence::holds);
    Ok(report)
}

/// Levelwise lifts `B_n = lift(C_n, l, box)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chain2D {
    levels: Vec<Set2D>,
    l: u64,
    window: Window,
}

impl Chain2D {
    pub fn levels(&self) -> &[Set2D] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &Set2D {
        &self.levels[n - 1]
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn window(&self) -> Window {
        self.window
    }
}

pub fn lift_chain(chain: &Chain, l: u64, bounds: Box2D) -> Chain2D {
    let levels: Vec<Set2D> = chain.levels().iter().map(|c| lift(c, l, bounds)).collect();
    debug_assert!(levels.windows(2).all(|p| p[1].is_subset_of(&p[0])));
    Chain2D { levels, l, window: chain.window() }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InclusionSearch {
    Found(usize),
    InsufficientDepth,
}

/// Least `N ∈ [n, k]` with `C_N ∩ [lo, hi − (a+lb)] ⊆ ⋂_{i=0}^{l} (−(a+ib) + C_n)`.
///
/// Requires `a, a+b, …, a+lb ∈ C_n`; a missing term is a precondition error.
pub fn eq1_inclusion_search(chain: &Chain, n: usize, a: u64, b: u64, l: u64) -> Result<InclusionSearch> {
    chain.check_level(n)?;
    if a == 0 || b == 0 {
        return Err(Error::ParamOutOfRange("a and b must be >= 1".into()));
    }
    let shifts: Vec<u64> = (0..=l).map(|i| a + i * b).collect();
    if let Some((i, t)) = shifts.iter().enumerate().find(|(_, &t)| !chain.level(n).contains(t)) {
        return Err(Error::Precondition(format!("term a+{i}b = {t} of ({a},{b}) is not in level {n}")));
    }
    Ok((n..=chain.depth())
        .find(|&big_n| includes_in_translates(chain.level(big_n), chain.level(n), &shifts))
        .map_or(InclusionSearch::InsufficientDepth, InclusionSearch::Found))
}

/// True iff every `(a₁, b₁) ∈ B_N` maps to `(a₁+a, b₁+b) ∈ B_n`, over the cells
/// where the translated pair lies in the box and its progression `a₁+a + i(b₁+b)`,
/// `i <= l`, stays inside the window.
pub fn verify_lifted_translate(chain: &Chain2D, n: usize, big_n: usize, a: u64, b: u64) -> Result<bool> {
    if n == 0 || big_n < n || big_n > chain.depth() {
        return Err(Error::ParamOutOfRange(format!("need 1 <= n <= N <= {}", chain.depth())));
    }
    let (target, source) = (chain.level(n), chain.level(big_n));
    let bounds = target.bounds();
    let hi = chain.window.hi() as u128;
    Ok(source.iter().all(|(a1, b1)| {
        let (x, y) = (a1 + a, b1 + b);
        let in_view = bounds.contains(x, y) && x as u128 + chain.l as u128 * y as u128 <= hi;
        !in_view || target.contains(x, y)
    }))
}
